#include <doctest.h>

#include <cmath>
#include <numeric>

#include "blakit/dsp.hpp"
#include "blakit/sequences.hpp"

using namespace blakit;
using seq::SignalClass;

namespace {

double max_suppressed_ratio(const seq::ExcitationSignal& s) {
  const auto spec = dsp::dft(s.samples);
  double max_mag = 0.0;
  for (const auto& bin : spec.bins) max_mag = std::max(max_mag, std::abs(bin));
  double worst = 0.0;
  for (std::size_t k = 0; k < s.n(); ++k) {
    bool suppressed = false;
    if (s.signal_class == SignalClass::kDs || s.signal_class == SignalClass::kRcs) {
      suppressed = (k % 2 == 0 || k % 3 == 0);
    } else if (s.signal_class == SignalClass::kIrmlbs) {
      suppressed = (k % 2 == 0);
    }
    if (suppressed) worst = std::max(worst, std::abs(spec.bins[k]) / max_mag);
  }
  return worst;
}

double spectral_flatness(const seq::ExcitationSignal& s) {
  const auto spec = dsp::dft(s.samples);
  double lo = 1e300;
  double hi = 0.0;
  for (std::size_t k = 0; k < s.n(); ++k) {
    if (!s.excited_bins[k]) continue;
    lo = std::min(lo, std::abs(spec.bins[k]));
    hi = std::max(hi, std::abs(spec.bins[k]));
  }
  return lo / hi;
}

}  // namespace

TEST_SUITE("sequences") {

TEST_CASE("mlbs order 3 with taps {3,2} gives the hand-enumerated sequence") {
  const std::vector<int> taps = {3, 2};
  const auto s = seq::mlbs(3, taps, 1.0);
  const std::vector<double> expected = {1, 1, 1, -1, -1, 1, -1};
  REQUIRE(s.samples.size() == 7);
  for (std::size_t k = 0; k < 7; ++k) CHECK(s.samples[k] == expected[k]);
  CHECK(s.signal_class == SignalClass::kMlbs);
  CHECK(s.rms == doctest::Approx(1.0));
}

TEST_CASE("mlbs off-peak autocorrelation is exactly -amp^2/N") {
  for (int order : {3, 5, 7}) {
    const double amp = 1.5;
    const auto s = seq::mlbs(order, amp);
    const auto r = seq::circular_autocorrelation(s.samples);
    const auto n = static_cast<double>(s.n());
    CHECK(r[0] == doctest::Approx(amp * amp).epsilon(1e-14));
    for (std::size_t lag = 1; lag < s.n(); ++lag) {
      CHECK(r[lag] == doctest::Approx(-amp * amp / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("mlbs order 9 has the protocol length") {
  CHECK(seq::mlbs(9, 1.0).n() == 511);
}

TEST_CASE("mlbs magnitude spectrum is flat off DC") {
  const auto s = seq::mlbs(6, 1.0);
  const auto spec = dsp::dft(s.samples);
  const double expected = std::sqrt(static_cast<double>(s.n()) + 1.0);
  for (std::size_t k = 1; k < s.n(); ++k) {
    CHECK(std::abs(spec.bins[k]) == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(std::abs(spec.bins[0]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("non-primitive taps are rejected with the achieved period") {
  const std::vector<int> taps = {4, 2};  // factors into a shorter cycle
  CHECK_THROWS_WITH_AS(seq::mlbs(4, taps, 1.0),
                       doctest::Contains("achieved period"), std::invalid_argument);
  CHECK_THROWS_AS(seq::mlbs(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(seq::mlbs(25, 1.0), std::invalid_argument);
}

TEST_CASE("default tap table is maximal for every order") {
  for (int order = 2; order <= 24; ++order) {
    const auto taps = seq::default_taps(order);
    CHECK(seq::lfsr_period(order, taps) == (std::size_t{1} << order) - 1);
  }
}

TEST_CASE("primitive tap enumeration matches the known counts") {
  CHECK(seq::primitive_taps(7).size() == 18);
  CHECK(seq::primitive_taps(8).size() == 16);
  CHECK(seq::primitive_taps(9).size() == 48);
  CHECK(seq::primitive_taps(9, 5).size() == 5);
  CHECK_THROWS_AS(seq::primitive_taps(15), std::invalid_argument);
}

TEST_CASE("irmlbs applies the alternating sign to the tiled base") {
  const std::vector<int> taps = {3, 2};
  const auto s = seq::irmlbs(3, taps, 1.0);
  const std::vector<double> expected = {1, -1, 1, 1, -1, -1, -1, -1, 1, -1, -1, 1, 1, 1};
  REQUIRE(s.n() == 14);
  for (std::size_t k = 0; k < 14; ++k) CHECK(s.samples[k] == expected[k]);
}

TEST_CASE("irmlbs order 8 has the protocol length and dead even bins") {
  const auto s = seq::irmlbs(8, 1.0);
  CHECK(s.n() == 510);
  CHECK(max_suppressed_ratio(s) < 1e-12);
  double sum = 0.0;
  for (double v : s.samples) sum += v;
  CHECK(sum == 0.0);
}

TEST_CASE("inverse repeat requires an odd binary base") {
  seq::ExcitationSignal even_base;
  even_base.samples = {1.0, -1.0, 1.0, -1.0};
  CHECK_THROWS_AS(seq::inverse_repeat(even_base), std::invalid_argument);
  seq::ExcitationSignal ternary;
  ternary.samples = {1.0, 0.0, -1.0};
  CHECK_THROWS_AS(seq::inverse_repeat(ternary), std::invalid_argument);
}

TEST_CASE("ds from an order-7 base has the protocol length") {
  const auto s = seq::ds_ternary(seq::mlbs(7, 1.0), 1.0);
  CHECK(s.n() == 762);
  CHECK(s.signal_class == SignalClass::kDs);
}

TEST_CASE("ds suppresses every bin divisible by 2 or 3") {
  const auto base = seq::mlbs(3, 1.0);  // length 7 -> N = 42
  const auto s = seq::ds_ternary(base, 1.0);
  CHECK(s.n() == 42);
  CHECK(max_suppressed_ratio(s) < 1e-12);
  double sum = 0.0;
  for (double v : s.samples) sum += v;
  CHECK(sum == 0.0);
}

TEST_CASE("ds of a length-1 base is the tiled multiplier") {
  seq::ExcitationSignal one;
  one.samples = {1.0};
  const auto s = seq::ds_ternary(one, 1.0);
  REQUIRE(s.n() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(s.samples[k] == seq::kTernaryPattern[k]);
  const auto spec = dsp::dft(s.samples);
  for (std::size_t k : {0, 2, 3, 4}) CHECK(std::abs(spec.bins[k]) < 1e-12);
  CHECK(std::abs(spec.bins[1]) > 1.0);
}

TEST_CASE("ds rejects bad bases") {
  seq::ExcitationSignal ternary;
  ternary.samples = {1.0, 0.0, -1.0, 1.0, -1.0};
  CHECK_THROWS_AS(seq::ds_ternary(ternary, 1.0), std::invalid_argument);
  seq::ExcitationSignal shares_factor;
  shares_factor.samples = {1.0, -1.0, 1.0};  // gcd(3, 6) = 3
  CHECK_THROWS_AS(seq::ds_ternary(shares_factor, 1.0), std::invalid_argument);
}

TEST_CASE("rcs instances satisfy every exact constraint") {
  Rng rng(101);
  const double amp = 2.0;
  for (int instance = 0; instance < 10; ++instance) {
    const auto s = seq::rcs(762, rng, 4, amp);
    const std::size_t n = s.n();
    const std::size_t p = n / 6;

    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : s.samples) {
      sum += v;
      sum_sq += v * v;
    }
    CHECK(sum == 0.0);
    CHECK(sum_sq / n == doctest::Approx(2.0 / 3.0 * amp * amp).epsilon(1e-14));

    for (std::size_t k = 0; k < n / 2; ++k) {
      CHECK(s.samples[k + n / 2] == -s.samples[k]);
    }
    for (std::size_t k = 0; k < n / 3; ++k) {
      CHECK(s.samples[k] + s.samples[k + n / 3] + s.samples[k + 2 * n / 3] == 0.0);
    }

    const auto r = seq::circular_autocorrelation(s.samples);
    const double a2 = amp * amp;
    const std::array<double, 6> pattern = {2.0 / 3.0,  1.0 / 3.0, -1.0 / 3.0,
                                           -2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0};
    for (std::size_t q = 0; q < 6; ++q) {
      CHECK(r[q * p] == doctest::Approx(a2 * pattern[q]).epsilon(1e-13));
    }
    CHECK(max_suppressed_ratio(s) < 1e-12);
  }
}

TEST_CASE("unit-amplitude ternary sequences satisfy u^3 = u") {
  Rng rng(102);
  const auto s = seq::rcs(90, rng);
  for (double v : s.samples) CHECK(v * v * v == v);
  const auto d = seq::ds_ternary(seq::mlbs(5, 1.0), 1.0);
  for (double v : d.samples) CHECK(v * v * v == v);
}

TEST_CASE("rcs autocorrelation at n=12 matches the forced grid values") {
  Rng rng(103);
  const auto s = seq::rcs(12, rng);
  const auto r = seq::circular_autocorrelation(s.samples);
  CHECK(r[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r[4] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(r[6] == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("rcs validates its arguments") {
  Rng rng(104);
  CHECK_THROWS_AS(seq::rcs(100, rng), std::invalid_argument);
  CHECK_THROWS_AS(seq::rcs(762, rng, 0), std::invalid_argument);
}

TEST_CASE("flatness selection never does worse than the first candidate") {
  for (std::uint64_t master : {1ull, 2ull, 3ull, 4ull}) {
    Rng a(master);
    Rng b(master);
    const double selected = spectral_flatness(seq::rcs(762, a, 8));
    const double first = spectral_flatness(seq::rcs(762, b, 1));
    CHECK(selected >= first);
  }
}

TEST_CASE("wgn moments converge") {
  Rng rng(105);
  const double sigma = 0.7;
  const auto s = seq::wgn(1'000'000, rng, sigma);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : s.samples) {
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(s.n());
  CHECK(std::abs(sum / n) < 4.0 * sigma / std::sqrt(n));
  CHECK(sum_sq / n == doctest::Approx(sigma * sigma).epsilon(0.05));
  CHECK_THROWS_AS(seq::wgn(10, rng, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(seq::wgn(0, rng, 1.0), std::invalid_argument);
}

TEST_CASE("normalize hits the target exactly") {
  Rng rng(106);
  SUBCASE("ternary at rms 1 gets amplitude sqrt(3/2)") {
    const auto s = seq::normalize(seq::rcs(762, rng), 1.0);
    CHECK(seq::rms(s.samples) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.levels[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-13));
    double sum_sq = 0.0;
    for (double v : s.samples) sum_sq += v * v;
    CHECK(sum_sq / s.n() == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("unit binary sequence is unchanged") {
    const auto s = seq::mlbs(5, 1.0);
    const auto scaled = seq::normalize(s, 1.0);
    for (std::size_t k = 0; k < s.n(); ++k) CHECK(scaled.samples[k] == s.samples[k]);
  }
  SUBCASE("round trip lands within 1e-12") {
    const auto s = seq::wgn(501, rng, 3.0);
    const auto scaled = seq::normalize(s, 0.125);
    CHECK(std::abs(seq::rms(scaled.samples) - 0.125) < 1e-12);
  }
  SUBCASE("zero signal is rejected") {
    seq::ExcitationSignal zero;
    zero.samples.assign(8, 0.0);
    CHECK_THROWS_AS(seq::normalize(zero, 1.0), std::invalid_argument);
  }
}

TEST_CASE("circular autocorrelation of all zeros is all zeros") {
  const std::vector<double> zeros(5, 0.0);
  const auto r = seq::circular_autocorrelation(zeros);
  for (double v : r.values) CHECK(v == 0.0);
}

TEST_CASE("excited bin rules and numeric verification") {
  SUBCASE("ds length 42 follows the mod-6 pattern") {
    const auto s = seq::ds_ternary(seq::mlbs(3, 1.0), 1.0);
    const auto mask = seq::excited_bins(s);
    for (std::size_t k = 0; k < 42; ++k) {
      CHECK(mask[k] == (k % 6 == 1 || k % 6 == 5));
    }
  }
  SUBCASE("irmlbs excludes every even bin") {
    const auto mask = seq::excited_bins(seq::irmlbs(5, 1.0));
    for (std::size_t k = 0; k < mask.size(); k += 2) CHECK_FALSE(mask[k]);
    CHECK(mask[1]);
  }
  SUBCASE("wgn excites everything except DC") {
    Rng rng(107);
    const auto mask = seq::excited_bins(seq::wgn(64, rng, 1.0));
    CHECK_FALSE(mask[0]);
    for (std::size_t k = 1; k < 64; ++k) CHECK(mask[k]);
  }
  SUBCASE("a malformed sequence is detected") {
    seq::ExcitationSignal fake;
    fake.signal_class = SignalClass::kRcs;
    fake.samples.assign(12, 1.0);  // constant: misses every claimed excited bin
    CHECK_THROWS_AS(seq::excited_bins(fake), std::invalid_argument);
  }
}

TEST_CASE("crest factor ordering binary <= ternary <= wgn at equal rms") {
  Rng rng(108);
  for (int i = 0; i < 5; ++i) {
    const auto binary = seq::normalize(seq::mlbs(8, 1.0), 1.0);
    const auto ternary = seq::normalize(seq::rcs(762, rng), 1.0);
    const auto noise = seq::normalize(seq::wgn(762, rng, 1.0), 1.0);
    auto crest = [](const seq::ExcitationSignal& s) {
      double peak = 0.0;
      for (double v : s.samples) peak = std::max(peak, std::abs(v));
      return peak / seq::rms(s.samples);
    };
    CHECK(crest(binary) == doctest::Approx(1.0));
    CHECK(crest(ternary) == doctest::Approx(std::sqrt(1.5)));
    CHECK(crest(binary) <= crest(ternary));
    CHECK(crest(ternary) <= crest(noise));
  }
}

TEST_CASE("mlbs imbalance is exactly one sample") {
  for (int order : {4, 6, 9}) {
    const auto s = seq::mlbs(order, 1.0);
    double sum = 0.0;
    for (double v : s.samples) sum += v;
    CHECK(std::abs(sum) == doctest::Approx(1.0));
  }
}

}  // TEST_SUITE
