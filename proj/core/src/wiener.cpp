#include "blakit/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blakit/waveform_io.hpp"

namespace blakit::wiener {

Nonlinearity Nonlinearity::hard_clip(double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("hard_clip: threshold must be positive");
  }
  return {NonlinearityKind::kHardClip, threshold};
}

double Nonlinearity::operator()(double x) const {
  switch (kind) {
    case NonlinearityKind::kIdentity: return x;
    case NonlinearityKind::kCubic: return x * x * x;
    case NonlinearityKind::kCubicPlusSquare: return x * x * x + x * x;
    case NonlinearityKind::kSquare: return x * x;
    case NonlinearityKind::kHardClip: return std::clamp(x, -clip_threshold, clip_threshold);
  }
  return x;
}

FirstOrderLowpass FirstOrderLowpass::design(double cutoff_hz, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw std::invalid_argument("first-order lowpass: cutoff must lie in (0, fs/2)");
  }
  FirstOrderLowpass f;
  f.cutoff_hz = cutoff_hz;
  f.sample_rate_hz = sample_rate_hz;
  const double c = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  f.b0 = c / (1.0 + c);
  f.b1 = f.b0;
  f.a1 = (c - 1.0) / (1.0 + c);
  return f;
}

dsp::cdouble FirstOrderLowpass::response(double frequency_hz) const {
  const double w = 2.0 * std::numbers::pi * frequency_hz / sample_rate_hz;
  const dsp::cdouble z_inv = std::polar(1.0, -w);
  return (b0 + b1 * z_inv) / (1.0 + a1 * z_inv);
}

std::vector<double> fir_steady_state(std::span<const double> g, std::span<const double> u) {
  const std::size_t n = u.size();
  const std::size_t h = g.size();
  if (h == 0) throw std::invalid_argument("fir_steady_state: empty impulse response");
  if (h > n) {
    throw std::invalid_argument("fir_steady_state: impulse response longer than the period");
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
      acc += g[k] * u[(t + n - k) % n];
    }
    x[t] = acc;
  }
  return x;
}

namespace {

// One pass of the direct-form filter over `input`, state carried across calls.
struct LowpassState {
  double x_prev = 0.0;
  double y_prev = 0.0;
};

void run_lowpass(const FirstOrderLowpass& f, std::span<const double> input,
                 LowpassState& state, std::vector<double>* output) {
  for (double x : input) {
    const double y = f.b0 * x + f.b1 * state.x_prev - f.a1 * state.y_prev;
    state.x_prev = x;
    state.y_prev = y;
    if (output != nullptr) output->push_back(y);
  }
}

}  // namespace

std::vector<double> iir_lowpass_steady_state(double cutoff_hz, double sample_rate_hz,
                                             std::span<const double> u_period,
                                             int settle_periods) {
  if (settle_periods < 0) {
    throw std::invalid_argument("iir_lowpass_steady_state: negative settle count");
  }
  const FirstOrderLowpass f = FirstOrderLowpass::design(cutoff_hz, sample_rate_hz);
  LowpassState state;
  for (int p = 0; p < settle_periods; ++p) run_lowpass(f, u_period, state, nullptr);
  std::vector<double> out;
  out.reserve(u_period.size());
  run_lowpass(f, u_period, state, &out);
  return out;
}

std::vector<double> apply_nonlinearity(const Nonlinearity& nl, std::span<const double> x) {
  std::vector<double> y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) y[t] = nl(x[t]);
  return y;
}

dsp::cvector iir_lowpass_frf(const FirstOrderLowpass& filter, std::size_t n) {
  dsp::cvector h(n);
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = filter.response(filter.sample_rate_hz * static_cast<double>(k) /
                           static_cast<double>(n));
  }
  return h;
}

WaveformRecord simulate(const WienerModel& model, const seq::ExcitationSignal& u,
                        const SimulateOptions& options) {
  if (options.oversample < 1) throw std::invalid_argument("simulate: oversample must be >= 1");
  if (options.n_periods < 1) throw std::invalid_argument("simulate: n_periods must be >= 1");

  const std::vector<double> held = io::hold_upsample(u.samples, options.oversample);
  const std::size_t n = held.size();

  WaveformRecord record;
  record.sample_rate_hz = options.generator_rate_hz * options.oversample;
  record.period_len = n;
  record.n_periods = options.n_periods;
  record.discard_periods = options.include_transient ? options.settle_periods : 0;
  record.signal_class = seq::to_string(u.signal_class);
  record.generator_period = u.n();

  const int total_periods = record.n_periods + record.discard_periods;
  record.input.reserve(static_cast<std::size_t>(total_periods) * n);
  for (int p = 0; p < total_periods; ++p) {
    record.input.insert(record.input.end(), held.begin(), held.end());
  }

  std::vector<double> linear_out;
  if (const auto* fir = std::get_if<FirBlock>(&model.linear)) {
    const std::vector<double> period = fir_steady_state(fir->coefficients, held);
    linear_out.reserve(record.input.size());
    for (int p = 0; p < total_periods; ++p) {
      linear_out.insert(linear_out.end(), period.begin(), period.end());
    }
  } else {
    const auto& lp = std::get<FirstOrderLowpass>(model.linear);
    if (lp.sample_rate_hz != record.sample_rate_hz) {
      throw std::invalid_argument("simulate: filter sample rate does not match "
                                  "generator rate times oversample factor");
    }
    LowpassState state;
    linear_out.reserve(record.input.size());
    if (options.include_transient) {
      run_lowpass(lp, record.input, state, &linear_out);
    } else {
      for (int p = 0; p < options.settle_periods; ++p) run_lowpass(lp, held, state, nullptr);
      for (int p = 0; p < options.n_periods; ++p) run_lowpass(lp, held, state, &linear_out);
    }
  }

  record.output = apply_nonlinearity(model.nonlinearity, linear_out);
  return record;
}

}  // namespace blakit::wiener
