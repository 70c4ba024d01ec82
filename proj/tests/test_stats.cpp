#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blakit/rng.hpp"
#include "blakit/stats.hpp"

using namespace blakit;

TEST_SUITE("stats") {

TEST_CASE("large normal sample is close to its fitted normal") {
  Rng rng(51);
  std::vector<double> samples(1'000'000);
  for (auto& v : samples) v = 1.7 + 0.4 * rng.normal();
  CHECK(stats::kl_vs_normal(samples) < 0.005);
}

TEST_CASE("two-point sample against four bins, by hand") {
  // Samples {-1, +1}: fitted mean 0, fitted (population) sigma 1. Four bins
  // over +/-2 sigma put each sample in an inner bin of normal mass
  // Phi(1) - Phi(0), so D = ln(0.5 / (Phi(1) - Phi(0))).
  const std::vector<double> samples = {-1.0, 1.0};
  const double phi_1 = 0.5 * std::erfc(-1.0 / std::numbers::sqrt2);
  const double inner_mass = phi_1 - 0.5;
  const double expected = std::log(0.5 / inner_mass);
  CHECK(stats::kl_vs_normal(samples, 4, 2.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("divergence is nonnegative for skewed data") {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> samples(2000);
    for (auto& v : samples) v = std::exp(rng.normal());
    CHECK(stats::kl_vs_normal(samples) >= 0.0);
  }
}

TEST_CASE("divergence is invariant under affine rescaling") {
  Rng rng(53);
  std::vector<double> samples(5000);
  for (auto& v : samples) v = rng.normal() + 0.2 * rng.uniform();
  std::vector<double> mapped(samples);
  for (auto& v : mapped) v = -3.5 * v + 11.0;
  CHECK(stats::kl_vs_normal(samples) ==
        doctest::Approx(stats::kl_vs_normal(mapped)).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(stats::kl_vs_normal({{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(stats::kl_vs_normal({{2.0, 2.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("crest factor reference values") {
  CHECK(stats::crest_factor({{1.0, -1.0, 1.0, -1.0}}) == doctest::Approx(1.0));
  // Unit-amplitude ternary with a 2/3 duty of nonzeros.
  CHECK(stats::crest_factor({{1.0, 1.0, 0.0, -1.0, -1.0, 0.0}}) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(stats::crest_factor({{0.0, 1.0, 0.0, -1.0}}) ==
        doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  CHECK_THROWS_AS(stats::crest_factor({{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(stats::crest_factor(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("crest factor is scale invariant") {
  Rng rng(54);
  std::vector<double> samples(257);
  for (auto& v : samples) v = rng.normal();
  const double base = stats::crest_factor(samples);
  for (auto& v : samples) v *= 42.0;
  CHECK(stats::crest_factor(samples) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("histogram edges and drop rules") {
  const std::vector<double> samples = {-2.0, -0.5, 0.0, 0.999, 1.0, 3.0};
  const auto h = stats::histogram(samples, 4, -1.0, 1.0);
  CHECK(h.total == 4);  // -2 and 3 fall outside
  CHECK(h.counts[0] == 1);  // -0.5
  CHECK(h.counts[2] == 1);  // 0.0
  CHECK(h.counts[3] == 2);  // 0.999 and the right edge value 1.0
  CHECK(h.edges.front() == doctest::Approx(-1.0));
  CHECK(h.edges.back() == doctest::Approx(1.0));
}

}  // TEST_SUITE
