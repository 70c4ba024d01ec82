#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blakit::stats {

struct Histogram {
  std::vector<double> edges;        // B + 1 ascending edges
  std::vector<std::size_t> counts;  // B bins
  std::size_t total = 0;            // samples inside [edges.front(), edges.back()]
};

/// Counts over equal-width bins spanning [lo, hi]; samples outside are dropped.
Histogram histogram(std::span<const double> samples, int bins, double lo, double hi);

/// Standard normal CDF.
double normal_cdf(double z);

/// Kullback-Leibler divergence D(p || q) between the normalized histogram of
/// the samples and the normal fitted by moments (mean, population variance),
/// over `bins` equal bins spanning +/- span_sigmas fitted sigmas around the
/// mean. q is the exact normal mass per bin; samples beyond the span are
/// dropped before normalizing p. Throws on fewer than two samples or zero
/// variance.
double kl_vs_normal(std::span<const double> samples, int bins = 50,
                    double span_sigmas = 4.0);

/// max|x| / rms(x). Throws on an all-zero signal.
double crest_factor(std::span<const double> samples);

}  // namespace blakit::stats
