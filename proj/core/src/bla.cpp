#include "blakit/bla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "blakit/waveform_io.hpp"

namespace blakit::bla {

dsp::cvector estimate_group(const std::vector<WaveformRecord>& records) {
  if (records.empty()) throw std::invalid_argument("estimate_group: no records");
  const std::size_t n = records.front().period_len;
  std::vector<double> suu(n, 0.0);
  dsp::cvector syu(n, dsp::cdouble{0.0, 0.0});
  for (const auto& record : records) {
    if (record.period_len != n) {
      throw std::invalid_argument("estimate_group: records have mismatched period lengths");
    }
    auto [u_periods, y_periods] = io::segment(record);
    const auto auto_p = dsp::auto_power(u_periods);
    const auto cross_p = dsp::cross_power(y_periods, u_periods);
    for (std::size_t k = 0; k < n; ++k) {
      suu[k] += auto_p[k];
      syu[k] += cross_p[k];
    }
  }
  const double max_power = *std::max_element(suu.begin(), suu.end());
  const double threshold = 1e-12 * max_power;
  dsp::cvector g(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (suu[k] <= threshold) {
      g[k] = dsp::cdouble{std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN()};
    } else {
      g[k] = syu[k] / suu[k];
    }
  }
  return g;
}

BlaEstimate combine_groups(const std::vector<dsp::cvector>& group_frfs,
                           const std::vector<bool>& excited_bins,
                           std::size_t period_len, double sample_rate_hz) {
  if (group_frfs.empty()) throw std::invalid_argument("combine_groups: no groups");
  if (excited_bins.size() != period_len) {
    throw std::invalid_argument("combine_groups: mask length does not match the period");
  }
  for (const auto& g : group_frfs) {
    if (g.size() != period_len) {
      throw std::invalid_argument("combine_groups: group FRF length mismatch");
    }
  }

  BlaEstimate est;
  est.groups = static_cast<int>(group_frfs.size());
  est.period_len = period_len;
  est.sample_rate_hz = sample_rate_hz;

  for (std::size_t k = 0; k <= period_len / 2; ++k) {
    if (!excited_bins[k]) continue;
    bool usable = true;
    for (const auto& g : group_frfs) {
      if (std::isnan(g[k].real())) {
        usable = false;
        break;
      }
    }
    if (!usable) {
      est.excluded_bins.push_back(k);
      continue;
    }
    dsp::cdouble mean{0.0, 0.0};
    for (const auto& g : group_frfs) mean += g[k];
    mean /= static_cast<double>(est.groups);

    est.bins.push_back(k);
    est.freq.push_back(sample_rate_hz * static_cast<double>(k) /
                       static_cast<double>(period_len));
    est.g_mean.push_back(mean);

    if (est.groups >= 2) {
      double mag_mean = 0.0;
      for (const auto& g : group_frfs) mag_mean += std::abs(g[k]);
      mag_mean /= static_cast<double>(est.groups);
      double ss = 0.0;
      for (const auto& g : group_frfs) {
        const double d = std::abs(g[k]) - mag_mean;
        ss += d * d;
      }
      const double std_linear = std::sqrt(ss / static_cast<double>(est.groups - 1));
      est.g_std_db.push_back(dsp::magnitude_db(std_linear));
    }
  }
  return est;
}

BlaEstimate estimate(const std::vector<WaveformRecord>& records,
                     const std::vector<bool>& excited_bins, int group_size) {
  if (group_size < 1) throw std::invalid_argument("estimate: group size must be >= 1");
  if (records.size() < static_cast<std::size_t>(group_size)) {
    throw std::invalid_argument("estimate: " + std::to_string(records.size()) +
                                " realizations cannot fill a group of " +
                                std::to_string(group_size));
  }
  const std::size_t n_groups = records.size() / static_cast<std::size_t>(group_size);
  std::vector<dsp::cvector> group_frfs;
  group_frfs.reserve(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    std::vector<WaveformRecord> group(records.begin() + g * group_size,
                                      records.begin() + (g + 1) * group_size);
    group_frfs.push_back(estimate_group(group));
  }
  return combine_groups(group_frfs, excited_bins, records.front().period_len,
                        records.front().sample_rate_hz);
}

ScaledEstimate scale_to_reference(const BlaEstimate& estimate,
                                  std::span<const dsp::cdouble> g_ref) {
  if (g_ref.size() != estimate.g_mean.size()) {
    throw std::invalid_argument("scale_to_reference: reference/estimate bin mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g_ref.size(); ++i) {
    num += (g_ref[i] * std::conj(estimate.g_mean[i])).real();
    den += std::norm(estimate.g_mean[i]);
  }
  if (den == 0.0) {
    throw std::invalid_argument("scale_to_reference: estimate has zero energy");
  }
  const double factor = num / den;

  ScaledEstimate out{estimate, factor};
  for (auto& v : out.estimate.g_mean) v *= factor;
  const double shift_db = 20.0 * std::log10(std::abs(factor));
  for (auto& v : out.estimate.g_std_db) {
    v = std::max(v + shift_db, dsp::kDbFloor);
  }
  return out;
}

RatioView ratio_to_reference(const BlaEstimate& estimate,
                             std::span<const dsp::cdouble> g_ref) {
  if (g_ref.size() != estimate.g_mean.size()) {
    throw std::invalid_argument("ratio_to_reference: reference/estimate bin mismatch");
  }
  RatioView view;
  view.mag_db.resize(g_ref.size());
  view.phase_deg.resize(g_ref.size());
  for (std::size_t i = 0; i < g_ref.size(); ++i) {
    const double mag = std::abs(estimate.g_mean[i]);
    if (mag == 0.0) {
      view.mag_db[i] = std::numeric_limits<double>::quiet_NaN();
      view.phase_deg[i] = std::numeric_limits<double>::quiet_NaN();
      view.excluded_bins.push_back(estimate.bins[i]);
      continue;
    }
    view.mag_db[i] = 20.0 * std::log10(std::abs(g_ref[i]) / mag);
    // Principal value in (-180, 180]: arg of G_ref * conj(G).
    view.phase_deg[i] = std::arg(g_ref[i] * std::conj(estimate.g_mean[i])) * 180.0 /
                        std::numbers::pi;
  }
  return view;
}

dsp::cvector frf_fir(std::span<const double> g, std::size_t n) {
  if (g.empty()) throw std::invalid_argument("frf_fir: empty impulse response");
  if (g.size() > n) throw std::invalid_argument("frf_fir: more taps than bins");
  std::vector<double> padded(n, 0.0);
  std::copy(g.begin(), g.end(), padded.begin());
  return dsp::dft(padded).bins;
}

dsp::cvector at_bins(const dsp::cvector& full, const std::vector<std::size_t>& bins) {
  dsp::cvector out;
  out.reserve(bins.size());
  for (std::size_t k : bins) out.push_back(full.at(k));
  return out;
}

}  // namespace blakit::bla
