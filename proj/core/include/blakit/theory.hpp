#pragma once

#include <cstddef>
#include <span>

#include "blakit/correlation.hpp"
#include "blakit/rng.hpp"
#include "blakit/wiener.hpp"

namespace blakit::theory {

/// Sum of squared FIR coefficients.
double alpha2(std::span<const double> g);

/// Ensemble autocorrelation of a unit-amplitude RCS over one period:
/// 2/3 at lag 0, 1/3 at n/6 and 5n/6, -1/3 at n/3 and 2n/3, -2/3 at n/2,
/// zero elsewhere.
std::vector<double> ideal_rcs_autocorrelation(std::size_t n);

/// Closed-form output/input cross-correlation of a Wiener system with FIR
/// impulse response g (order H < n/6), cubic nonlinearity, and unit-amplitude
/// RCS input:
///
///   R_yu[r] = 2 alpha2 (g * R_u)[r] - (g^3 * R_u)[r]
///
/// with R_u the ideal RCS autocorrelation. The factored single-term form
/// (see xcorr_rcs_cubic_factored) is evaluated alongside and the two must
/// agree within 1e-12 at every lag, otherwise a logic_error is thrown.
CrossCorrelation xcorr_rcs_cubic(std::span<const double> g, std::size_t n);

/// Factored form of the same quantity: with r = r_q + r_m split on the n/6
/// grid (r_q the grid part, r_m the remainder),
/// R_yu[r] = g[r_m] R_u[r_q] (2 alpha2 - g^2[r_m]), zero when r_m >= H.
CrossCorrelation xcorr_rcs_cubic_factored(std::span<const double> g, std::size_t n);

/// Gaussian reference for unit-variance white input: R_yu[r] = 3 alpha2 g[r],
/// support r = 0..H-1.
CrossCorrelation xcorr_gaussian_cubic(std::span<const double> g);

/// Unit-variance RCS (amplitude sqrt(3/2)) in the |r| < n/6 regime:
/// R_yu[r] = 3 alpha2 g[r] - (3/2) g^3[r], support r = 0..H-1.
CrossCorrelation xcorr_rcs_cubic_unitvar(std::span<const double> g);

/// Same regime for an i.i.d. random binary unit-variance input:
/// R_yu[r] = 3 alpha2 g[r] - 2 g^3[r].
CrossCorrelation xcorr_binary_cubic_unitvar(std::span<const double> g);

/// Bias coefficients of the -c g^3[r] deviation from the Gaussian reference.
inline constexpr double kRcsBiasCoefficient = 1.5;
inline constexpr double kBinaryBiasCoefficient = 2.0;

struct MonteCarloOptions {
  double amplitude = 1.0;       // RCS amplitude (sqrt(3/2) gives unit variance)
  int flatten_candidates = 32;
};

/// Monte Carlo estimate of the same cross-correlation: fresh RCS instances of
/// length n are pushed through the model and the circular cross-correlations
/// (1/N) sum_t y[t] u[(t-r) mod N] are averaged. The nonlinearity must be
/// odd-dominant (cubic or cubic-plus-square). Instance i draws from the
/// deterministic substream i of a base seed taken from `rng`.
CrossCorrelation monte_carlo_xcorr(const wiener::WienerModel& model, std::size_t n,
                                   int instances, Rng& rng,
                                   const MonteCarloOptions& options = {});

}  // namespace blakit::theory
