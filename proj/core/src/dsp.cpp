#include "blakit/dsp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace blakit::dsp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// e^{-j 2 pi k / n} for k < n/2, cached per length.
const cvector& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, cvector> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  cvector w(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(angle), std::sin(angle)};
  }
  return cache.emplace(n, std::move(w)).first->second;
}

void fft_pow2(cvector& x) {
  const std::size_t n = x.size();
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  const cvector& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cdouble t = x[i + k + len / 2] * w[k * stride];
        x[i + k + len / 2] = x[i + k] - t;
        x[i + k] += t;
      }
    }
  }
}

// Bluestein chirp tables for one length: chirp[k] = e^{-j pi k^2 / n} and the
// FFT of its conjugate laid out for circular convolution of size m >= 2n-1.
struct ChirpPlan {
  std::size_t m = 0;
  cvector chirp;      // length n
  cvector kernel_fft; // length m
};

const ChirpPlan& chirp_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, ChirpPlan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  ChirpPlan plan;
  plan.m = std::bit_ceil(2 * n - 1);
  plan.chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle small; e^{-j pi k^2 / n} has period 2n in k^2.
    const std::size_t k2 = (k * k) % (2 * n);
    const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    plan.chirp[k] = {std::cos(angle), std::sin(angle)};
  }
  cvector kernel(plan.m, cdouble{0.0, 0.0});
  kernel[0] = std::conj(plan.chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    kernel[k] = std::conj(plan.chirp[k]);
    kernel[plan.m - k] = std::conj(plan.chirp[k]);
  }
  fft_pow2(kernel);
  plan.kernel_fft = std::move(kernel);
  return cache.emplace(n, std::move(plan)).first->second;
}

void fft_bluestein(cvector& x) {
  const std::size_t n = x.size();
  const ChirpPlan& plan = chirp_plan(n);
  cvector a(plan.m, cdouble{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * plan.chirp[k];
  fft_pow2(a);
  for (std::size_t k = 0; k < plan.m; ++k) a[k] *= plan.kernel_fft[k];
  // Inverse FFT of size m via conjugation.
  for (auto& v : a) v = std::conj(v);
  fft_pow2(a);
  const double scale = 1.0 / static_cast<double>(plan.m);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::conj(a[k]) * scale * plan.chirp[k];
  }
}

}  // namespace

void fft_in_place(cvector& x) {
  if (x.size() <= 1) return;
  if (is_pow2(x.size())) {
    fft_pow2(x);
  } else {
    fft_bluestein(x);
  }
}

void ifft_in_place(cvector& x) {
  for (auto& v : x) v = std::conj(v);
  fft_in_place(x);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : x) v = std::conj(v) * scale;
}

cvector fft(cvector x) {
  fft_in_place(x);
  return x;
}

cvector ifft(cvector x) {
  ifft_in_place(x);
  return x;
}

Spectrum dft(std::span<const double> x, double sample_rate_hz) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  cvector bins(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) bins[t] = cdouble{x[t], 0.0};
  fft_in_place(bins);
  return Spectrum{std::move(bins), sample_rate_hz};
}

std::vector<double> idft_real(const cvector& bins) {
  cvector x = bins;
  ifft_in_place(x);
  std::vector<double> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = x[t].real();
  return out;
}

cvector dft_direct(std::span<const double> x) {
  const std::size_t n = x.size();
  cvector bins(n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -kTwoPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * cdouble{std::cos(angle), std::sin(angle)};
    }
    bins[k] = acc;
  }
  return bins;
}

std::vector<double> auto_power(const std::vector<std::vector<double>>& periods) {
  if (periods.empty()) throw std::invalid_argument("auto_power: no periods");
  const std::size_t n = periods.front().size();
  std::vector<double> acc(n, 0.0);
  for (const auto& period : periods) {
    if (period.size() != n) throw std::invalid_argument("auto_power: ragged period matrix");
    Spectrum s = dft(period);
    for (std::size_t k = 0; k < n; ++k) acc[k] += std::norm(s.bins[k]);
  }
  const double scale = 1.0 / static_cast<double>(periods.size());
  for (auto& v : acc) v *= scale;
  return acc;
}

cvector cross_power(const std::vector<std::vector<double>>& y_periods,
                    const std::vector<std::vector<double>>& u_periods) {
  if (y_periods.size() != u_periods.size() || y_periods.empty()) {
    throw std::invalid_argument("cross_power: period-count mismatch");
  }
  const std::size_t n = u_periods.front().size();
  cvector acc(n, cdouble{0.0, 0.0});
  for (std::size_t p = 0; p < y_periods.size(); ++p) {
    if (y_periods[p].size() != n || u_periods[p].size() != n) {
      throw std::invalid_argument("cross_power: shape mismatch");
    }
    Spectrum ys = dft(y_periods[p]);
    Spectrum us = dft(u_periods[p]);
    for (std::size_t k = 0; k < n; ++k) acc[k] += ys.bins[k] * std::conj(us.bins[k]);
  }
  const double scale = 1.0 / static_cast<double>(y_periods.size());
  for (auto& v : acc) v *= scale;
  return acc;
}

std::vector<double> circular_cross_correlation(std::span<const double> y,
                                               std::span<const double> u) {
  if (y.size() != u.size() || y.empty()) {
    throw std::invalid_argument("circular_cross_correlation: length mismatch");
  }
  const std::size_t n = y.size();
  Spectrum ys = dft(y);
  Spectrum us = dft(u);
  cvector prod(n);
  for (std::size_t k = 0; k < n; ++k) prod[k] = ys.bins[k] * std::conj(us.bins[k]);
  ifft_in_place(prod);
  std::vector<double> r(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = prod[k].real() * scale;
  return r;
}

double magnitude_db(double magnitude) {
  const double floor_linear = std::pow(10.0, kDbFloor / 20.0);
  if (!(magnitude > floor_linear)) return kDbFloor;
  return 20.0 * std::log10(magnitude);
}

}  // namespace blakit::dsp
