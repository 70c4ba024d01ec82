#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace blakit::dsp {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

/// DFT of one record. Forward transform is un-normalized,
/// X[k] = sum_t x[t] exp(-j 2 pi k t / N); the inverse carries the 1/N.
struct Spectrum {
  cvector bins;
  double sample_rate_hz = 1.0;

  std::size_t n() const { return bins.size(); }
  double bin_frequency(std::size_t k) const {
    return sample_rate_hz * static_cast<double>(k) / static_cast<double>(bins.size());
  }
};

/// In-place forward/inverse FFT for any length >= 1. Power-of-two lengths run
/// the radix-2 kernel directly, everything else goes through Bluestein's
/// chirp-z algorithm, so composite lengths such as 762 = 2*3*127 stay
/// O(N log N). Twiddle and chirp tables are cached per length.
void fft_in_place(cvector& x);
void ifft_in_place(cvector& x);

cvector fft(cvector x);
cvector ifft(cvector x);

Spectrum dft(std::span<const double> x, double sample_rate_hz = 1.0);

/// Inverse of `dft` for conjugate-symmetric bins; the (numerically tiny)
/// imaginary residue is discarded.
std::vector<double> idft_real(const cvector& bins);

/// Reference O(N^2) transform, kept as the independent oracle for the FFT.
cvector dft_direct(std::span<const double> x);

/// Averaged auto-power over P periods: S_uu[k] = (1/P) sum_p |U_p[k]|^2.
std::vector<double> auto_power(const std::vector<std::vector<double>>& periods);

/// Averaged cross-power over P periods: S_yu[k] = (1/P) sum_p Y_p[k] conj(U_p[k]).
/// Throws std::invalid_argument on shape mismatch.
cvector cross_power(const std::vector<std::vector<double>>& y_periods,
                    const std::vector<std::vector<double>>& u_periods);

/// Circular cross-correlation (1/N) sum_t y[t] u[(t-r) mod N], r = 0..N-1,
/// computed via FFT.
std::vector<double> circular_cross_correlation(std::span<const double> y,
                                               std::span<const double> u);

inline constexpr double kDbFloor = -350.0;

/// 20 log10 of a linear magnitude, clamped at kDbFloor so CSV output stays finite.
double magnitude_db(double magnitude);

}  // namespace blakit::dsp
