#include "blakit/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blakit/dsp.hpp"
#include "blakit/sequences.hpp"

namespace blakit::theory {
namespace {

void check_theorem_inputs(std::span<const double> g, std::size_t n) {
  if (g.empty()) throw std::invalid_argument("xcorr_rcs_cubic: empty impulse response");
  if (n == 0 || n % 6 != 0) {
    throw std::invalid_argument("xcorr_rcs_cubic: length " + std::to_string(n) +
                                " is not divisible by 6");
  }
  if (g.size() >= n / 6) {
    throw std::invalid_argument(
        "xcorr_rcs_cubic: FIR order " + std::to_string(g.size()) +
        " violates the theorem hypothesis H < N/6 = " + std::to_string(n / 6));
  }
}

}  // namespace

double alpha2(std::span<const double> g) {
  if (g.empty()) throw std::invalid_argument("alpha2: empty impulse response");
  double acc = 0.0;
  for (double v : g) acc += v * v;
  return acc;
}

std::vector<double> ideal_rcs_autocorrelation(std::size_t n) {
  if (n == 0 || n % 6 != 0) {
    throw std::invalid_argument("ideal_rcs_autocorrelation: length not divisible by 6");
  }
  const std::size_t p = n / 6;
  std::vector<double> r(n, 0.0);
  static constexpr std::array<double, 6> kPattern = {2.0 / 3.0,  1.0 / 3.0, -1.0 / 3.0,
                                                     -2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0};
  for (std::size_t q = 0; q < 6; ++q) r[q * p] = kPattern[q];
  return r;
}

CrossCorrelation xcorr_rcs_cubic_factored(std::span<const double> g, std::size_t n) {
  check_theorem_inputs(g, n);
  const std::size_t p = n / 6;
  const double a2 = alpha2(g);
  const std::vector<double> r_u = ideal_rcs_autocorrelation(n);

  CrossCorrelation out;
  out.values.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t r_q = (r / p) * p;
    const std::size_t r_m = r - r_q;
    if (r_m >= g.size()) continue;
    out.values[r] = g[r_m] * r_u[r_q] * (2.0 * a2 - g[r_m] * g[r_m]);
  }
  return out;
}

CrossCorrelation xcorr_rcs_cubic(std::span<const double> g, std::size_t n) {
  check_theorem_inputs(g, n);
  const double a2 = alpha2(g);
  const std::vector<double> r_u = ideal_rcs_autocorrelation(n);

  CrossCorrelation out;
  out.values.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double ru = r_u[(r + n - k) % n];
      if (ru == 0.0) continue;
      acc += (2.0 * a2 * g[k] - g[k] * g[k] * g[k]) * ru;
    }
    out.values[r] = acc;
  }

  const CrossCorrelation factored = xcorr_rcs_cubic_factored(g, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (std::abs(out.values[r] - factored.values[r]) >= 1e-12) {
      throw std::logic_error("xcorr_rcs_cubic: convolution and factored forms disagree at lag " +
                             std::to_string(r));
    }
  }
  return out;
}

CrossCorrelation xcorr_gaussian_cubic(std::span<const double> g) {
  const double a2 = alpha2(g);
  CrossCorrelation out;
  out.values.resize(g.size());
  for (std::size_t r = 0; r < g.size(); ++r) out.values[r] = 3.0 * a2 * g[r];
  return out;
}

CrossCorrelation xcorr_rcs_cubic_unitvar(std::span<const double> g) {
  const double a2 = alpha2(g);
  CrossCorrelation out;
  out.values.resize(g.size());
  for (std::size_t r = 0; r < g.size(); ++r) {
    out.values[r] = 3.0 * a2 * g[r] - kRcsBiasCoefficient * g[r] * g[r] * g[r];
  }
  return out;
}

CrossCorrelation xcorr_binary_cubic_unitvar(std::span<const double> g) {
  const double a2 = alpha2(g);
  CrossCorrelation out;
  out.values.resize(g.size());
  for (std::size_t r = 0; r < g.size(); ++r) {
    out.values[r] = 3.0 * a2 * g[r] - kBinaryBiasCoefficient * g[r] * g[r] * g[r];
  }
  return out;
}

CrossCorrelation monte_carlo_xcorr(const wiener::WienerModel& model, std::size_t n,
                                   int instances, Rng& rng,
                                   const MonteCarloOptions& options) {
  if (instances < 1) throw std::invalid_argument("monte_carlo_xcorr: instances must be >= 1");
  if (!model.nonlinearity.odd_dominant()) {
    throw std::invalid_argument(
        "monte_carlo_xcorr: nonlinearity must be odd-dominant (cubic or cubic+square)");
  }
  const std::uint64_t base_seed = rng.next_u64();

  CrossCorrelation out;
  out.values.assign(n, 0.0);
  for (int i = 0; i < instances; ++i) {
    Rng stream = Rng::substream(base_seed, static_cast<std::uint64_t>(i));
    const seq::ExcitationSignal u =
        seq::rcs(n, stream, options.flatten_candidates, options.amplitude);
    const WaveformRecord record = wiener::simulate(model, u);
    const std::vector<double> xc =
        dsp::circular_cross_correlation(record.output, record.input);
    for (std::size_t r = 0; r < n; ++r) out.values[r] += xc[r];
  }
  const double scale = 1.0 / static_cast<double>(instances);
  for (auto& v : out.values) v *= scale;
  return out;
}

}  // namespace blakit::theory
