#include "blakit/sequences.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "blakit/dsp.hpp"

namespace blakit::seq {
namespace {

constexpr int kMinOrder = 2;
constexpr int kMaxOrder = 24;

// Maximal-length feedback taps, one set per order. Correctness is not taken
// on faith: mlbs() measures the achieved period at generation time.
const std::vector<int>& taps_table(int order) {
  static const std::vector<std::vector<int>> table = {
      {2, 1},           {3, 2},           {4, 3},          {5, 3},
      {6, 5},           {7, 6},           {8, 6, 5, 4},    {9, 5},
      {10, 7},          {11, 9},          {12, 11, 10, 4}, {13, 12, 11, 8},
      {14, 13, 12, 2},  {15, 14},         {16, 15, 13, 4}, {17, 14},
      {18, 11},         {19, 18, 17, 14}, {20, 17},        {21, 19},
      {22, 21},         {23, 18},         {24, 23, 22, 17},
  };
  return table[static_cast<std::size_t>(order - kMinOrder)];
}

void check_order(int order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw std::invalid_argument("lfsr order " + std::to_string(order) +
                                " out of range [2, 24]");
  }
}

double binary_amplitude(const ExcitationSignal& base, const char* op) {
  double amp = 0.0;
  for (double v : base.samples) amp = std::max(amp, std::abs(v));
  if (amp <= 0.0) {
    throw std::invalid_argument(std::string(op) + ": base is identically zero");
  }
  for (double v : base.samples) {
    if (std::abs(v) != amp) {
      throw std::invalid_argument(std::string(op) + ": base is not a binary +/-a sequence");
    }
  }
  return amp;
}

ExcitationSignal finish(ExcitationSignal s) {
  s.rms = rms(s.samples);
  s.excited_bins = excited_bins_rule(s.signal_class, s.n());
  return s;
}

}  // namespace

std::string to_string(SignalClass cls) {
  switch (cls) {
    case SignalClass::kMlbs: return "mlbs";
    case SignalClass::kIrmlbs: return "irmlbs";
    case SignalClass::kDs: return "ds";
    case SignalClass::kRcs: return "rcs";
    case SignalClass::kWgn: return "wgn";
    case SignalClass::kRandomBinary: return "random-binary";
  }
  return "unknown";
}

SignalClass signal_class_from_string(const std::string& name) {
  if (name == "mlbs") return SignalClass::kMlbs;
  if (name == "irmlbs") return SignalClass::kIrmlbs;
  if (name == "ds") return SignalClass::kDs;
  if (name == "rcs") return SignalClass::kRcs;
  if (name == "wgn") return SignalClass::kWgn;
  if (name == "random-binary") return SignalClass::kRandomBinary;
  throw std::invalid_argument("unknown signal class '" + name + "'");
}

Lfsr::Lfsr(int order_, std::span<const int> taps) : order(order_) {
  check_order(order);
  if (taps.empty()) throw std::invalid_argument("lfsr: empty tap set");
  for (int t : taps) {
    if (t < 1 || t > order) {
      throw std::invalid_argument("lfsr: tap " + std::to_string(t) +
                                  " outside [1, order]");
    }
    taps_mask |= 1u << (t - 1);
  }
  state = (order == 32) ? ~0u : ((1u << order) - 1);  // all ones
}

int Lfsr::step() {
  const int out = static_cast<int>((state >> (order - 1)) & 1u);
  const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state & taps_mask)) & 1u;
  const std::uint32_t mask = (1u << order) - 1;
  state = ((state << 1) | fb) & mask;
  return out;
}

std::vector<int> default_taps(int order) {
  check_order(order);
  return taps_table(order);
}

std::size_t lfsr_period(int order, std::span<const int> taps) {
  Lfsr reg(order, taps);
  const std::uint32_t seed_state = reg.state;
  const std::size_t limit = (std::size_t{1} << order) - 1;
  for (std::size_t t = 1; t <= limit; ++t) {
    reg.step();
    if (reg.state == seed_state) return t;
  }
  return 0;  // no return within 2^order - 1 steps: not a permutation cycle through the seed
}

std::vector<std::vector<int>> primitive_taps(int order, std::size_t max_count) {
  check_order(order);
  if (order > 14) {
    throw std::invalid_argument("primitive_taps: exhaustive search limited to order <= 14");
  }
  const std::size_t full_period = (std::size_t{1} << order) - 1;
  std::vector<std::vector<int>> found;
  // Stage `order` must feed back for the register map to be a permutation;
  // the remaining taps range over all subsets of {1..order-1}.
  for (std::uint32_t subset = 0; subset < (1u << (order - 1)); ++subset) {
    std::vector<int> taps;
    for (int t = order; t >= 1; --t) {
      if (t == order || (subset >> (t - 1)) & 1u) taps.push_back(t);
    }
    if (lfsr_period(order, taps) == full_period) {
      found.push_back(std::move(taps));
      if (max_count != 0 && found.size() == max_count) break;
    }
  }
  return found;
}

ExcitationSignal mlbs(int order, std::span<const int> taps, double amplitude) {
  check_order(order);
  const std::size_t period = (std::size_t{1} << order) - 1;
  Lfsr reg(order, taps);
  const std::uint32_t seed_state = reg.state;

  ExcitationSignal s;
  s.signal_class = SignalClass::kMlbs;
  s.levels = {amplitude, -amplitude};
  s.samples.resize(period);
  std::size_t first_return = 0;
  for (std::size_t t = 0; t < period; ++t) {
    s.samples[t] = reg.step() ? amplitude : -amplitude;
    if (first_return == 0 && reg.state == seed_state) first_return = t + 1;
  }
  if (first_return != period) {
    throw std::invalid_argument(
        "mlbs: tap set is not primitive for order " + std::to_string(order) +
        ": achieved period " + std::to_string(first_return) + ", expected " +
        std::to_string(period));
  }
  return finish(std::move(s));
}

ExcitationSignal mlbs(int order, double amplitude) {
  const auto taps = default_taps(order);
  return mlbs(order, taps, amplitude);
}

ExcitationSignal inverse_repeat(const ExcitationSignal& base) {
  const double amp = binary_amplitude(base, "inverse_repeat");
  const std::size_t n = base.n();
  if (n % 2 == 0) {
    throw std::invalid_argument("inverse_repeat: base period must be odd");
  }
  ExcitationSignal s;
  s.signal_class = SignalClass::kIrmlbs;
  s.levels = {amp, -amp};
  s.samples.resize(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s.samples[k] = base.samples[k % n] * sign;
  }
  return finish(std::move(s));
}

ExcitationSignal irmlbs(int order, std::span<const int> taps, double amplitude) {
  return inverse_repeat(mlbs(order, taps, amplitude));
}

ExcitationSignal irmlbs(int order, double amplitude) {
  return inverse_repeat(mlbs(order, amplitude));
}

ExcitationSignal ds_ternary(const ExcitationSignal& base, double amplitude) {
  const double base_amp = binary_amplitude(base, "ds_ternary");
  const std::size_t p = base.n();
  if (std::gcd(p, std::size_t{6}) != 1) {
    throw std::invalid_argument("ds_ternary: base length " + std::to_string(p) +
                                " shares a factor with 6");
  }
  ExcitationSignal s;
  s.signal_class = SignalClass::kDs;
  s.levels = {amplitude, 0.0, -amplitude};
  s.samples.resize(6 * p);
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    const double sign = base.samples[k % p] / base_amp;
    s.samples[k] = sign * kTernaryPattern[k % 6] * amplitude;
  }
  return finish(std::move(s));
}

ExcitationSignal rcs(std::size_t n, Rng& rng, int flatten_candidates, double amplitude) {
  if (n == 0 || n % 6 != 0) {
    throw std::invalid_argument("rcs: length " + std::to_string(n) +
                                " is not divisible by 6");
  }
  if (flatten_candidates < 1) {
    throw std::invalid_argument("rcs: flatten_candidates must be >= 1");
  }
  const std::size_t p = n / 6;
  const auto mask = excited_bins_rule(SignalClass::kRcs, n);

  std::vector<double> best;
  double best_flatness = -1.0;
  std::vector<double> candidate(n);
  std::vector<std::size_t> phase(p);
  for (int c = 0; c < flatten_candidates; ++c) {
    // Independent phase offset into the period-6 pattern per base index.
    // Every sample is then 0 or +/-1 with probability 1/3 each, distinct base
    // indices are statistically independent, and the six-segment tiling keeps
    // the grid autocorrelation and harmonic suppression exact per instance.
    for (auto& v : phase) v = rng.next_u64() % 6;
    for (std::size_t q = 0; q < 6; ++q) {
      for (std::size_t i = 0; i < p; ++i) {
        candidate[q * p + i] = kTernaryPattern[(q + phase[i]) % 6] * amplitude;
      }
    }
    if (flatten_candidates == 1) {
      best = candidate;
      break;
    }
    const dsp::Spectrum spec = dsp::dft(candidate);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!mask[k]) continue;
      const double mag = std::abs(spec.bins[k]);
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    const double flatness = lo / hi;
    if (flatness > best_flatness) {
      best_flatness = flatness;
      best = candidate;
    }
  }

  ExcitationSignal s;
  s.signal_class = SignalClass::kRcs;
  s.levels = {amplitude, 0.0, -amplitude};
  s.samples = std::move(best);
  return finish(std::move(s));
}

ExcitationSignal wgn(std::size_t n, Rng& rng, double sigma) {
  if (n < 1) throw std::invalid_argument("wgn: length must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("wgn: sigma must be positive");
  ExcitationSignal s;
  s.signal_class = SignalClass::kWgn;
  s.samples.resize(n);
  for (auto& v : s.samples) v = sigma * rng.normal();
  return finish(std::move(s));
}

ExcitationSignal random_binary(std::size_t n, Rng& rng, double amplitude) {
  if (n < 1) throw std::invalid_argument("random_binary: length must be >= 1");
  ExcitationSignal s;
  s.signal_class = SignalClass::kRandomBinary;
  s.levels = {amplitude, -amplitude};
  s.samples.resize(n);
  for (auto& v : s.samples) v = amplitude * rng.sign();
  return finish(std::move(s));
}

double rms(std::span<const double> samples) {
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return samples.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(samples.size()));
}

ExcitationSignal normalize(const ExcitationSignal& signal, double target_rms) {
  const double current = rms(signal.samples);
  if (current == 0.0) {
    throw std::invalid_argument("normalize: signal is identically zero");
  }
  if (!(target_rms > 0.0)) {
    throw std::invalid_argument("normalize: target RMS must be positive");
  }
  const double factor = target_rms / current;
  ExcitationSignal out = signal;
  for (auto& v : out.samples) v *= factor;
  for (auto& v : out.levels) v *= factor;
  out.rms = rms(out.samples);
  return out;
}

CrossCorrelation circular_autocorrelation(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("circular_autocorrelation: empty input");
  CrossCorrelation r;
  r.values.resize(n, 0.0);
  for (std::size_t lag = 0; lag < n; ++lag) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += samples[k] * samples[(k + lag) % n];
    }
    r.values[lag] = acc / static_cast<double>(n);
  }
  return r;
}

std::vector<bool> excited_bins_rule(SignalClass cls, std::size_t n) {
  if (n == 0) throw std::invalid_argument("excited_bins_rule: empty signal");
  std::vector<bool> mask(n, false);
  switch (cls) {
    case SignalClass::kDs:
    case SignalClass::kRcs:
      if (n % 6 != 0) {
        throw std::invalid_argument("excited_bins_rule: ternary length not divisible by 6");
      }
      for (std::size_t k = 0; k < n; ++k) mask[k] = (k % 6 == 1 || k % 6 == 5);
      break;
    case SignalClass::kIrmlbs:
      for (std::size_t k = 0; k < n; ++k) mask[k] = (k % 2 == 1);
      break;
    case SignalClass::kMlbs:
    case SignalClass::kWgn:
    case SignalClass::kRandomBinary:
      for (std::size_t k = 1; k < n; ++k) mask[k] = true;
      break;
  }
  return mask;
}

std::vector<bool> excited_bins(const ExcitationSignal& signal) {
  const std::size_t n = signal.n();
  const auto mask = excited_bins_rule(signal.signal_class, n);
  const dsp::Spectrum spec = dsp::dft(signal.samples);

  double max_mag = 0.0;
  for (const auto& bin : spec.bins) max_mag = std::max(max_mag, std::abs(bin));
  const double threshold = static_cast<double>(n) * 1e-9 * max_mag;

  for (std::size_t k = 0; k < n; ++k) {
    if (mask[k] && !(std::abs(spec.bins[k]) > threshold)) {
      throw std::invalid_argument("excited_bins: bin " + std::to_string(k) +
                                  " should be excited but carries no energy");
    }
  }
  // Only the constructions with exact nulls are held to the suppression side;
  // Mlbs/Wgn/RandomBinary have a nonzero sample mean in general, so their
  // (unexcited by convention) DC bin is not required to vanish.
  const bool ternary = signal.signal_class == SignalClass::kDs ||
                       signal.signal_class == SignalClass::kRcs;
  const bool inverse_rep = signal.signal_class == SignalClass::kIrmlbs;
  if (ternary || inverse_rep) {
    for (std::size_t k = 0; k < n; ++k) {
      if (mask[k]) continue;
      const bool must_vanish = ternary ? (k % 2 == 0 || k % 3 == 0) : (k % 2 == 0);
      if (must_vanish && std::abs(spec.bins[k]) > threshold) {
        throw std::invalid_argument("excited_bins: suppressed bin " + std::to_string(k) +
                                    " carries unexpected energy");
      }
    }
  }
  return mask;
}

}  // namespace blakit::seq
