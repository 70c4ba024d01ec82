#pragma once

#include <span>
#include <variant>
#include <vector>

#include "blakit/dsp.hpp"
#include "blakit/sequences.hpp"
#include "blakit/waveform.hpp"

namespace blakit::wiener {

enum class NonlinearityKind { kIdentity, kCubic, kCubicPlusSquare, kSquare, kHardClip };

/// Static (memoryless) nonlinearity applied after the linear block.
struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::kIdentity;
  double clip_threshold = 0.0;  // HardClip only

  static Nonlinearity identity() { return {NonlinearityKind::kIdentity, 0.0}; }
  static Nonlinearity cubic() { return {NonlinearityKind::kCubic, 0.0}; }
  static Nonlinearity cubic_plus_square() { return {NonlinearityKind::kCubicPlusSquare, 0.0}; }
  static Nonlinearity square() { return {NonlinearityKind::kSquare, 0.0}; }
  static Nonlinearity hard_clip(double threshold);

  double operator()(double x) const;
  bool odd_dominant() const {
    return kind == NonlinearityKind::kCubic || kind == NonlinearityKind::kCubicPlusSquare;
  }
};

/// First-order lowpass, bilinear transform of 1/(1 + s/wc) with the cutoff
/// pre-warped so |H| = 1/sqrt(2) lands exactly on cutoff_hz. Unity DC gain.
struct FirstOrderLowpass {
  double cutoff_hz = 0.0;
  double sample_rate_hz = 0.0;
  double b0 = 0.0, b1 = 0.0, a1 = 0.0;  // y[t] = b0 x[t] + b1 x[t-1] - a1 y[t-1]

  static FirstOrderLowpass design(double cutoff_hz, double sample_rate_hz);
  dsp::cdouble response(double frequency_hz) const;
};

struct FirBlock {
  std::vector<double> coefficients;
};

/// Wiener structure: linear block (FIR taps or first-order IIR) followed by a
/// static nonlinearity.
struct WienerModel {
  std::variant<FirBlock, FirstOrderLowpass> linear;
  Nonlinearity nonlinearity;

  static WienerModel fir(std::vector<double> g, Nonlinearity nl) {
    return {FirBlock{std::move(g)}, nl};
  }
  static WienerModel iir_lowpass(double cutoff_hz, double sample_rate_hz, Nonlinearity nl) {
    return {FirstOrderLowpass::design(cutoff_hz, sample_rate_hz), nl};
  }
};

/// Steady-state response of an FIR block to the periodic input: circular
/// convolution x[t] = sum_k g[k] u[(t-k) mod N]. Requires len(g) <= N.
std::vector<double> fir_steady_state(std::span<const double> g, std::span<const double> u);

/// Steady-state response of the first-order lowpass: the filter is run from
/// zero state for settle_periods periods, then one period is recorded. The
/// recorded period converges geometrically (pole magnitude < 1) to the true
/// periodic fixed point.
std::vector<double> iir_lowpass_steady_state(double cutoff_hz, double sample_rate_hz,
                                             std::span<const double> u_period,
                                             int settle_periods = 3);

std::vector<double> apply_nonlinearity(const Nonlinearity& nl, std::span<const double> x);

/// Frequency response of the designed lowpass at the n DFT bin frequencies.
dsp::cvector iir_lowpass_frf(const FirstOrderLowpass& filter, std::size_t n);

struct SimulateOptions {
  int oversample = 1;          // zero-order hold factor applied to the input
  double generator_rate_hz = 1.0;
  int settle_periods = 3;      // IIR only
  int n_periods = 1;           // periods recorded after the transient
  bool include_transient = false;  // record the settle periods, marked as discard
};

/// Noise-free simulation of one excitation period through the model at
/// periodic steady state. The record's input is the (held) waveform actually
/// applied to the linear block, sampled at generator_rate_hz * oversample.
WaveformRecord simulate(const WienerModel& model, const seq::ExcitationSignal& u,
                        const SimulateOptions& options = {});

}  // namespace blakit::wiener
