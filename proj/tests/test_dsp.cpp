#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blakit/dsp.hpp"
#include "blakit/rng.hpp"

using namespace blakit;
using dsp::cdouble;

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
  return x;
}

double max_rel_error(const dsp::cvector& a, const dsp::cvector& b) {
  double scale = 0.0;
  for (const auto& v : a) scale = std::max(scale, std::abs(v));
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  return scale == 0.0 ? err : err / scale;
}

}  // namespace

TEST_SUITE("dsp") {

TEST_CASE("impulse transforms to all ones") {
  const std::vector<double> x = {1.0, 0.0, 0.0, 0.0};
  const auto spec = dsp::dft(x);
  for (const auto& bin : spec.bins) {
    CHECK(std::abs(bin - cdouble{1.0, 0.0}) < 1e-14);
  }
}

TEST_CASE("constant transforms to DC only") {
  const std::vector<double> x(6, 2.5);
  const auto spec = dsp::dft(x);
  CHECK(std::abs(spec.bins[0] - cdouble{15.0, 0.0}) < 1e-12);
  for (std::size_t k = 1; k < 6; ++k) CHECK(std::abs(spec.bins[k]) < 1e-12);
}

TEST_CASE("ternary pattern excites only bins 1 and 5") {
  const std::vector<double> m = {1.0, 1.0, 0.0, -1.0, -1.0, 0.0};
  const auto spec = dsp::dft(m);
  CHECK(std::abs(spec.bins[1]) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(spec.bins[5]) == doctest::Approx(3.0).epsilon(1e-12));
  for (std::size_t k : {0, 2, 3, 4}) CHECK(std::abs(spec.bins[k]) < 1e-12);
}

TEST_CASE("fft matches the direct transform across lengths") {
  Rng rng(11);
  for (std::size_t n : {1, 2, 3, 4, 5, 60, 127, 128, 510, 762}) {
    const auto x = random_vector(n, rng);
    const auto fast = dsp::dft(x).bins;
    const auto direct = dsp::dft_direct(x);
    CHECK(max_rel_error(direct, fast) < 1e-11);
  }
}

TEST_CASE("inverse reconstructs the input") {
  Rng rng(12);
  for (std::size_t n : {4, 9, 762}) {
    const auto x = random_vector(n, rng);
    const auto back = dsp::idft_real(dsp::dft(x).bins);
    double err = 0.0;
    for (std::size_t t = 0; t < n; ++t) err = std::max(err, std::abs(back[t] - x[t]));
    CHECK(err < 1e-9);
  }
}

TEST_CASE("parseval and linearity hold") {
  Rng rng(13);
  for (std::size_t n : {16, 127, 762}) {
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    const auto fx = dsp::dft(x).bins;
    const auto fy = dsp::dft(y).bins;

    double time_energy = 0.0;
    for (double v : x) time_energy += v * v;
    double freq_energy = 0.0;
    for (const auto& bin : fx) freq_energy += std::norm(bin);
    CHECK(freq_energy == doctest::Approx(n * time_energy).epsilon(1e-9));

    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) z[t] = 2.0 * x[t] - 0.5 * y[t];
    const auto fz = dsp::dft(z).bins;
    dsp::cvector expected(n);
    for (std::size_t k = 0; k < n; ++k) expected[k] = 2.0 * fx[k] - 0.5 * fy[k];
    CHECK(max_rel_error(expected, fz) < 1e-11);
  }
}

TEST_CASE("real input gives conjugate-symmetric bins") {
  Rng rng(14);
  const auto x = random_vector(90, rng);
  const auto bins = dsp::dft(x).bins;
  double scale = 0.0;
  for (const auto& v : bins) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 1; k < x.size(); ++k) {
    CHECK(std::abs(bins[k] - std::conj(bins[x.size() - k])) < 1e-9 * scale);
  }
}

TEST_CASE("auto power averages periods") {
  SUBCASE("single impulse period") {
    const auto p = dsp::auto_power({{1.0, 0.0, 0.0, 0.0}});
    for (double v : p) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("identical periods equal a single one") {
    const std::vector<double> period = {0.3, -1.2, 0.8, 0.1};
    const auto one = dsp::auto_power({period});
    const auto five = dsp::auto_power({period, period, period, period, period});
    for (std::size_t k = 0; k < 4; ++k) CHECK(five[k] == doctest::Approx(one[k]));
  }
  SUBCASE("two shifted impulses average to ones") {
    const auto p = dsp::auto_power({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(1.0));
  }
}

TEST_CASE("cross power identities") {
  Rng rng(15);
  const auto u = random_vector(8, rng);

  SUBCASE("y equal to u reduces to the auto power") {
    const auto cross = dsp::cross_power({u}, {u});
    const auto auto_p = dsp::auto_power({u});
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(cross[k].real() == doctest::Approx(auto_p[k]));
      CHECK(std::abs(cross[k].imag()) < 1e-12);
      CHECK(cross[k].real() >= -1e-12);
    }
  }
  SUBCASE("circular shift multiplies by the shift phasor") {
    std::vector<double> y(4);
    const std::vector<double> u4 = {0.5, -1.0, 2.0, 0.25};
    for (std::size_t t = 0; t < 4; ++t) y[t] = u4[(t + 3) % 4];  // delay by one
    const auto cross = dsp::cross_power({y}, {u4});
    const auto bins = dsp::dft(u4).bins;
    for (std::size_t k = 0; k < 4; ++k) {
      const cdouble expected =
          std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / 4.0) *
          std::norm(bins[k]);
      CHECK(std::abs(cross[k] - expected) < 1e-10);
    }
  }
  SUBCASE("gain doubles the cross power") {
    std::vector<double> y(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) y[t] = 2.0 * u[t];
    const auto cross = dsp::cross_power({y}, {u});
    const auto auto_p = dsp::auto_power({u});
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(cross[k].real() == doctest::Approx(2.0 * auto_p[k]));
    }
  }
  SUBCASE("swapping arguments conjugates") {
    const auto y = random_vector(8, rng);
    const auto yu = dsp::cross_power({y}, {u});
    const auto uy = dsp::cross_power({u}, {y});
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(yu[k] - std::conj(uy[k])) < 1e-10);
  }
  SUBCASE("shape mismatch throws") {
    CHECK_THROWS_AS(dsp::cross_power({{1.0, 2.0}}, {{1.0, 2.0, 3.0}}), std::invalid_argument);
  }
}

TEST_CASE("fft cross-correlation matches the definition") {
  Rng rng(16);
  for (std::size_t n : {5, 12, 31}) {
    const auto y = random_vector(n, rng);
    const auto u = random_vector(n, rng);
    const auto fast = dsp::circular_cross_correlation(y, u);
    for (std::size_t r = 0; r < n; ++r) {
      double direct = 0.0;
      for (std::size_t t = 0; t < n; ++t) direct += y[t] * u[(t + n - r) % n];
      CHECK(fast[r] == doctest::Approx(direct / n).epsilon(1e-10));
    }
  }
}

TEST_CASE("magnitude db floors at -350") {
  CHECK(dsp::magnitude_db(1.0) == doctest::Approx(0.0));
  CHECK(dsp::magnitude_db(0.5) == doctest::Approx(-6.0206).epsilon(1e-4));
  CHECK(dsp::magnitude_db(0.0) == dsp::kDbFloor);
  CHECK(dsp::magnitude_db(1e-300) == dsp::kDbFloor);
}

}  // TEST_SUITE
