#include "blakit/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blakit::stats {

Histogram histogram(std::span<const double> samples, int bins, double lo, double hi) {
  if (bins < 1) throw std::invalid_argument("histogram: need at least one bin");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty span");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + width * b;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= h.counts.size()) b = h.counts.size() - 1;  // x == hi lands in the last bin
    ++h.counts[b];
    ++h.total;
  }
  return h;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double kl_vs_normal(std::span<const double> samples, int bins, double span_sigmas) {
  if (samples.size() < 2) throw std::invalid_argument("kl_vs_normal: need at least 2 samples");
  if (!(span_sigmas > 0.0)) throw std::invalid_argument("kl_vs_normal: span must be positive");

  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(samples.size());
  if (!(var > 0.0)) throw std::invalid_argument("kl_vs_normal: zero sample variance");
  const double sigma = std::sqrt(var);

  const Histogram h = histogram(samples, bins, mean - span_sigmas * sigma,
                                mean + span_sigmas * sigma);
  if (h.total == 0) throw std::invalid_argument("kl_vs_normal: no samples inside the span");

  // Normal mass per bin. A q of exactly zero under a populated bin can only
  // happen when erfc underflows (span far beyond ~38 sigma); such bins are
  // merged with their inner neighbor rather than dividing by zero.
  std::vector<double> p(h.counts.size());
  std::vector<double> q(h.counts.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    p[b] = static_cast<double>(h.counts[b]) / static_cast<double>(h.total);
    q[b] = normal_cdf((h.edges[b + 1] - mean) / sigma) -
           normal_cdf((h.edges[b] - mean) / sigma);
  }
  for (std::size_t b = 0; b < q.size(); ++b) {
    if (q[b] <= 0.0 && p[b] > 0.0) {
      const std::size_t neighbor = (b + 1 < q.size()) ? b + 1 : b - 1;
      p[neighbor] += p[b];
      q[neighbor] += q[b];
      p[b] = 0.0;
    }
  }

  double d = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (p[b] > 0.0) d += p[b] * std::log(p[b] / q[b]);
  }
  return d;
}

double crest_factor(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("crest_factor: empty signal");
  double peak = 0.0;
  double power = 0.0;
  for (double x : samples) {
    peak = std::max(peak, std::abs(x));
    power += x * x;
  }
  if (power == 0.0) throw std::invalid_argument("crest_factor: signal has zero RMS");
  return peak / std::sqrt(power / static_cast<double>(samples.size()));
}

}  // namespace blakit::stats
