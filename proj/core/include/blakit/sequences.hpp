#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blakit/correlation.hpp"
#include "blakit/rng.hpp"

namespace blakit::seq {

/// Excitation families used for BLA measurement. Mlbs/Irmlbs are binary,
/// Ds/Rcs are ternary with harmonic multiples of 2 and 3 suppressed, Wgn is
/// white Gaussian noise and RandomBinary an i.i.d. coin-flip sequence.
enum class SignalClass { kMlbs, kIrmlbs, kDs, kRcs, kWgn, kRandomBinary };

std::string to_string(SignalClass cls);
SignalClass signal_class_from_string(const std::string& name);

/// One period of a periodic excitation plus its class metadata.
struct ExcitationSignal {
  std::vector<double> samples;
  SignalClass signal_class = SignalClass::kWgn;
  std::vector<double> levels;      // declared amplitude set, empty for Wgn
  double rms = 0.0;
  std::vector<bool> excited_bins;  // class rule over DFT bins 0..n-1

  std::size_t n() const { return samples.size(); }
};

/// Fibonacci LFSR over GF(2). State bit i holds stage s[i]; each step emits
/// s[order-1], computes the feedback as the XOR of the stages named in
/// `taps` (1-based), and shifts the feedback into stage 0.
struct Lfsr {
  int order = 0;
  std::uint32_t taps_mask = 0;
  std::uint32_t state = 0;

  Lfsr(int order, std::span<const int> taps);

  /// Advance one tick, returning the emitted bit.
  int step();
};

/// Feedback taps from the built-in maximal-length table, orders 2..24.
std::vector<int> default_taps(int order);

/// Measured period of the register started from the all-ones state.
std::size_t lfsr_period(int order, std::span<const int> taps);

/// All maximal-length tap sets of one order, in ascending mask order, up to
/// `max_count` (0 = no limit). Exhaustive search; restricted to order <= 14.
std::vector<std::vector<int>> primitive_taps(int order, std::size_t max_count = 0);

/// Maximum-length binary sequence of period 2^order - 1, levels {+a, -a}.
/// The achieved LFSR period is checked at generation time; taps that are not
/// primitive are rejected with the achieved period in the message.
ExcitationSignal mlbs(int order, std::span<const int> taps, double amplitude);
ExcitationSignal mlbs(int order, double amplitude);

/// Inverse-repeat of a binary base of odd period N: sample k is
/// base[k mod N] * (-1)^k, period 2N, even harmonics exactly zero.
ExcitationSignal inverse_repeat(const ExcitationSignal& base);

ExcitationSignal irmlbs(int order, std::span<const int> taps, double amplitude);
ExcitationSignal irmlbs(int order, double amplitude);

/// Ternary direct-synthesis sequence: the binary base (length coprime with 6)
/// tiled six times and multiplied per-sample by the period-6 pattern
/// (1, 1, 0, -1, -1, 0). Every DFT bin divisible by 2 or 3 is exactly zero.
ExcitationSignal ds_ternary(const ExcitationSignal& base, double amplitude);

/// Randomized constrained ternary sequence of length n = 6P: each base index
/// i < P draws an independent phase phi[i] uniform over {0..5} and segment q
/// holds u[qP + i] = m[(q + phi[i]) mod 6] * amplitude, with m the period-6
/// pattern (1, 1, 0, -1, -1, 0). Every instance satisfies exactly: zero mean,
/// mean square (2/3) a^2, u[k + n/2] = -u[k],
/// u[k] + u[k + n/3] + u[k + 2n/3] = 0, and the autocorrelation pattern
/// a^2 (2/3, 1/3, -1/3, -2/3, -1/3, 1/3) at lags q n/6. Across the ensemble,
/// samples at distinct base indices are statistically independent with
/// E[u] = 0 and E[u^2] = (2/3) a^2 at every position. Among
/// `flatten_candidates` draws, the one with the flattest excited-bin spectrum
/// (max of min|U|/max|U|) is returned.
ExcitationSignal rcs(std::size_t n, Rng& rng, int flatten_candidates = 32,
                     double amplitude = 1.0);

/// White Gaussian noise, i.i.d. N(0, sigma^2).
ExcitationSignal wgn(std::size_t n, Rng& rng, double sigma);

/// I.i.d. +/-amplitude coin flips.
ExcitationSignal random_binary(std::size_t n, Rng& rng, double amplitude = 1.0);

double rms(std::span<const double> samples);

/// Rescale so the sample RMS equals target_rms exactly. For the ternary
/// classes this reproduces the equal-power convention where the amplitude
/// becomes target_rms * sqrt(3/2).
ExcitationSignal normalize(const ExcitationSignal& signal, double target_rms);

/// R[r] = (1/N) sum_k u[k] u[(k+r) mod N], direct evaluation.
CrossCorrelation circular_autocorrelation(std::span<const double> samples);

/// Analytic excited-bin rule. Ds/Rcs: k mod 6 in {1, 5}; Irmlbs: odd k;
/// Mlbs/Wgn/RandomBinary: every k >= 1.
std::vector<bool> excited_bins_rule(SignalClass cls, std::size_t n);

/// Rule mask cross-checked against the DFT of the samples: every excited bin
/// must carry energy above n * 1e-9 * max|DFT|, and for the classes with
/// exact suppression guarantees (Ds/Rcs: bins divisible by 2 or 3; Irmlbs:
/// even bins; both including DC) the suppressed bins must sit below it.
/// Disagreement signals a malformed sequence and throws.
std::vector<bool> excited_bins(const ExcitationSignal& signal);

/// Per-sample multiplier behind the Ds/Rcs constructions.
inline constexpr std::array<int, 6> kTernaryPattern = {1, 1, 0, -1, -1, 0};

}  // namespace blakit::seq
