#include "blakit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <limits>
#include <stdexcept>

#include "blakit/stats.hpp"
#include "blakit/theory.hpp"

namespace blakit::repro {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::size_t class_index(seq::SignalClass cls) {
  const auto& order = protocol_classes();
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == cls) return i;
  }
  throw std::invalid_argument("class outside the comparison protocol");
}

// Seed-tag layout, one block per experiment family.
constexpr std::uint64_t kTagBlaComparison = 0;    // + system*16 + class
constexpr std::uint64_t kTagClipper = 64;         // + class
constexpr std::uint64_t kTagGaussianity = 128;    // + class
constexpr std::uint64_t kTagTheorem = 256;
constexpr std::uint64_t kTagPipeline = 512;       // + class

const std::vector<std::vector<int>>& unique_taps(int order) {
  static const auto order7 = seq::primitive_taps(7);
  static const auto order8 = seq::primitive_taps(8);
  static const auto order9 = seq::primitive_taps(9);
  switch (order) {
    case 7: return order7;
    case 8: return order8;
    case 9: return order9;
    default: throw std::invalid_argument("unique_taps: unsupported order");
  }
}

BlaTable make_table(const bla::BlaEstimate& scaled, const dsp::cvector& reference,
                    const bla::RatioView& ratio, double factor) {
  BlaTable t;
  t.scale_factor = factor;
  t.bins = scaled.bins;
  t.freq = scaled.freq;
  const std::size_t n = scaled.bins.size();
  t.mag_bla_db.resize(n);
  t.std_db.assign(n, kNan);
  t.mag_ref_db.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.mag_bla_db[i] = dsp::magnitude_db(std::abs(scaled.g_mean[i]));
    t.mag_ref_db[i] = dsp::magnitude_db(std::abs(reference[i]));
    if (!scaled.g_std_db.empty()) t.std_db[i] = scaled.g_std_db[i];
  }
  t.ratio_db = ratio.mag_db;
  t.phase_diff_deg = ratio.phase_deg;
  return t;
}

BlaTable table_without_reference(const bla::BlaEstimate& est) {
  BlaTable t;
  t.bins = est.bins;
  t.freq = est.freq;
  const std::size_t n = est.bins.size();
  t.mag_bla_db.resize(n);
  t.std_db.assign(n, kNan);
  t.mag_ref_db.assign(n, kNan);
  t.ratio_db.assign(n, kNan);
  t.phase_diff_deg.assign(n, kNan);
  for (std::size_t i = 0; i < n; ++i) {
    t.mag_bla_db[i] = dsp::magnitude_db(std::abs(est.g_mean[i]));
    if (!est.g_std_db.empty()) t.std_db[i] = est.g_std_db[i];
  }
  return t;
}

double mean_abs(const std::vector<double>& values) {
  double acc = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    acc += std::abs(v);
    ++n;
  }
  return n == 0 ? kNan : acc / static_cast<double>(n);
}

}  // namespace

const std::vector<TableSystem>& table_systems() {
  static const std::vector<TableSystem> systems = {
      {"system1", {1.0, 0.7, 0.3}, wiener::Nonlinearity::cubic()},
      {"system2", {1.0, 0.7, 0.3, 0.2, 0.1, 0.05}, wiener::Nonlinearity::cubic()},
      {"system3", {1.0, 0.7, 0.3}, wiener::Nonlinearity::cubic_plus_square()},
      {"system4", {1.0, 0.7, 0.3, 0.2, 0.1, 0.05}, wiener::Nonlinearity::cubic_plus_square()},
  };
  return systems;
}

int ProtocolCounts::count_for(seq::SignalClass cls) const {
  switch (cls) {
    case seq::SignalClass::kDs: return ds;
    case seq::SignalClass::kIrmlbs: return irmlbs;
    case seq::SignalClass::kMlbs: return mlbs;
    case seq::SignalClass::kRcs: return rcs;
    case seq::SignalClass::kWgn: return wgn;
    default: throw std::invalid_argument("count_for: class outside the protocol");
  }
}

ProtocolCounts clipper_counts() {
  ProtocolCounts c;
  c.rcs = 1000;
  c.wgn = 1000;
  return c;
}

const std::vector<seq::SignalClass>& protocol_classes() {
  static const std::vector<seq::SignalClass> order = {
      seq::SignalClass::kDs, seq::SignalClass::kRcs, seq::SignalClass::kWgn,
      seq::SignalClass::kMlbs, seq::SignalClass::kIrmlbs};
  return order;
}

std::size_t generator_period(seq::SignalClass cls) {
  switch (cls) {
    case seq::SignalClass::kDs: return 762;   // 6 * (2^7 - 1)
    case seq::SignalClass::kRcs: return 762;
    case seq::SignalClass::kWgn: return 762;
    case seq::SignalClass::kMlbs: return 511;  // 2^9 - 1
    case seq::SignalClass::kIrmlbs: return 510;  // 2 * (2^8 - 1)
    default: throw std::invalid_argument("generator_period: class outside the protocol");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return Rng::substream(master, tag).next_u64();
}

std::vector<seq::ExcitationSignal> paper_realizations(seq::SignalClass cls, int count,
                                                      std::uint64_t seed,
                                                      int flatten_candidates) {
  if (count < 1) throw std::invalid_argument("paper_realizations: count must be >= 1");
  std::vector<seq::ExcitationSignal> out;
  out.reserve(count);
  switch (cls) {
    case seq::SignalClass::kMlbs:
    case seq::SignalClass::kIrmlbs:
    case seq::SignalClass::kDs: {
      const int order = (cls == seq::SignalClass::kMlbs) ? 9
                        : (cls == seq::SignalClass::kIrmlbs) ? 8
                                                             : 7;
      const auto& taps = unique_taps(order);
      if (static_cast<std::size_t>(count) > taps.size()) {
        throw std::invalid_argument("paper_realizations: only " + std::to_string(taps.size()) +
                                    " unique order-" + std::to_string(order) +
                                    " sequences exist");
      }
      for (int i = 0; i < count; ++i) {
        if (cls == seq::SignalClass::kMlbs) {
          out.push_back(seq::mlbs(order, taps[i], 1.0));
        } else if (cls == seq::SignalClass::kIrmlbs) {
          out.push_back(seq::irmlbs(order, taps[i], 1.0));
        } else {
          out.push_back(seq::ds_ternary(seq::mlbs(order, taps[i], 1.0), 1.0));
        }
      }
      break;
    }
    case seq::SignalClass::kRcs:
      for (int i = 0; i < count; ++i) {
        Rng stream = Rng::substream(seed, static_cast<std::uint64_t>(i));
        out.push_back(seq::rcs(generator_period(cls), stream, flatten_candidates));
      }
      break;
    case seq::SignalClass::kWgn:
      for (int i = 0; i < count; ++i) {
        Rng stream = Rng::substream(seed, static_cast<std::uint64_t>(i));
        out.push_back(seq::wgn(generator_period(cls), stream, 1.0));
      }
      break;
    default:
      throw std::invalid_argument("paper_realizations: class outside the protocol");
  }
  return out;
}

std::vector<seq::ExcitationSignal> iid_realizations(seq::SignalClass cls, int count,
                                                    std::uint64_t seed) {
  std::vector<seq::ExcitationSignal> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng stream = Rng::substream(seed, static_cast<std::uint64_t>(i));
    switch (cls) {
      case seq::SignalClass::kDs:
        out.push_back(seq::ds_ternary(seq::random_binary(127, stream), 1.0));
        break;
      case seq::SignalClass::kIrmlbs:
        out.push_back(seq::inverse_repeat(seq::random_binary(255, stream)));
        break;
      case seq::SignalClass::kRcs:
        out.push_back(seq::rcs(762, stream));
        break;
      case seq::SignalClass::kWgn:
        out.push_back(seq::wgn(762, stream, 1.0));
        break;
      case seq::SignalClass::kRandomBinary:
        out.push_back(seq::random_binary(762, stream));
        break;
      default:
        throw std::invalid_argument("iid_realizations: MLBS has no i.i.d. ensemble");
    }
  }
  return out;
}

double unit_gaussian_bla_rms(std::span<const double> g) {
  return 1.0 / std::sqrt(3.0 * theory::alpha2(g));
}

std::vector<bool> estimation_mask(seq::SignalClass cls, std::size_t period_len,
                                  std::size_t gen_period) {
  if (gen_period == 0 || period_len % gen_period != 0) {
    throw std::invalid_argument("estimation_mask: period must be a multiple of the "
                                "generator period");
  }
  std::vector<bool> mask(period_len, false);
  for (std::size_t k = 1; k <= gen_period / 2; ++k) {
    bool on = false;
    switch (cls) {
      case seq::SignalClass::kDs:
      case seq::SignalClass::kRcs:
        on = (k % 6 == 1 || k % 6 == 5);
        break;
      case seq::SignalClass::kIrmlbs:
        on = (k % 2 == 1);
        break;
      default:
        on = true;
        break;
    }
    mask[k] = on;
  }
  return mask;
}

double BlaTable::mean_abs_ratio_db() const { return mean_abs(ratio_db); }
double BlaTable::mean_abs_phase_deg() const { return mean_abs(phase_diff_deg); }

void write_bla_table_csv(const std::filesystem::path& path, const BlaTable& table) {
  std::string text = "freq,mag_bla_db,std_db,mag_ref_db,ratio_db,phase_diff_deg\n";
  for (std::size_t i = 0; i < table.freq.size(); ++i) {
    text += fmt(table.freq[i]);
    text += ',';
    text += fmt(table.mag_bla_db[i]);
    text += ',';
    text += fmt(table.std_db[i]);
    text += ',';
    text += fmt(table.mag_ref_db[i]);
    text += ',';
    text += fmt(table.ratio_db[i]);
    text += ',';
    text += fmt(table.phase_diff_deg[i]);
    text += '\n';
  }
  io::atomic_write_text(path, text);
}

BlaTable bla_comparison_cell(int system_index, seq::SignalClass cls, std::uint64_t seed,
                             const ProtocolCounts& counts) {
  const auto& sys = table_systems().at(static_cast<std::size_t>(system_index));
  const std::size_t n = generator_period(cls);
  const double target_rms = unit_gaussian_bla_rms(sys.g);
  const std::uint64_t cell_seed = derive_seed(
      seed, kTagBlaComparison + static_cast<std::uint64_t>(system_index) * 16 + class_index(cls));

  const auto realizations = paper_realizations(cls, counts.count_for(cls), cell_seed);
  const wiener::WienerModel model = wiener::WienerModel::fir(sys.g, sys.nonlinearity);

  std::vector<WaveformRecord> records;
  records.reserve(realizations.size());
  for (const auto& r : realizations) {
    records.push_back(wiener::simulate(model, seq::normalize(r, target_rms)));
  }

  const auto mask = estimation_mask(cls, n, n);
  const bla::BlaEstimate est = bla::estimate(records, mask, counts.group_size);
  const dsp::cvector reference = bla::at_bins(bla::frf_fir(sys.g, n), est.bins);
  const bla::ScaledEstimate scaled = bla::scale_to_reference(est, reference);
  const bla::RatioView ratio = bla::ratio_to_reference(scaled.estimate, reference);
  return make_table(scaled.estimate, reference, ratio, scaled.factor);
}

BlaTable clipper_cell(seq::SignalClass cls, double rms_level, std::uint64_t seed,
                      const ClipperSetup& setup, const ProtocolCounts& counts) {
  const std::size_t n_gen = generator_period(cls);
  const std::size_t n_acq = n_gen * static_cast<std::size_t>(setup.oversample);
  const std::uint64_t cell_seed = derive_seed(seed, kTagClipper + class_index(cls));

  const wiener::WienerModel model = wiener::WienerModel::iir_lowpass(
      setup.cutoff_hz, setup.acquisition_rate_hz,
      wiener::Nonlinearity::hard_clip(setup.clip_threshold));
  wiener::SimulateOptions options;
  options.oversample = setup.oversample;
  options.generator_rate_hz = setup.acquisition_rate_hz / setup.oversample;
  options.settle_periods = setup.settle_periods;

  const auto realizations = paper_realizations(cls, counts.count_for(cls), cell_seed);
  const int usable = (counts.count_for(cls) / counts.group_size) * counts.group_size;

  std::vector<dsp::cvector> group_frfs;
  std::vector<WaveformRecord> group;
  group.reserve(counts.group_size);
  for (int i = 0; i < usable; ++i) {
    group.push_back(wiener::simulate(model, seq::normalize(realizations[i], rms_level), options));
    if (group.size() == static_cast<std::size_t>(counts.group_size)) {
      group_frfs.push_back(bla::estimate_group(group));
      group.clear();
    }
  }

  const auto mask = estimation_mask(cls, n_acq, n_gen);
  const bla::BlaEstimate est =
      bla::combine_groups(group_frfs, mask, n_acq, setup.acquisition_rate_hz);
  const auto& filter = std::get<wiener::FirstOrderLowpass>(model.linear);
  const dsp::cvector reference = bla::at_bins(wiener::iir_lowpass_frf(filter, n_acq), est.bins);
  const bla::ScaledEstimate scaled = bla::scale_to_reference(est, reference);
  const bla::RatioView ratio = bla::ratio_to_reference(scaled.estimate, reference);
  return make_table(scaled.estimate, reference, ratio, scaled.factor);
}

BlaTable estimate_records(const std::vector<WaveformRecord>& records,
                          const std::optional<io::SteppedSineTable>& reference,
                          int group_size, seq::SignalClass cls, std::size_t gen_period) {
  if (records.empty()) throw std::invalid_argument("estimate_records: no records");
  const std::size_t n = records.front().period_len;
  const auto mask = estimation_mask(cls, n, gen_period);
  const bla::BlaEstimate est = bla::estimate(records, mask, group_size);
  if (!reference.has_value()) return table_without_reference(est);

  const dsp::cvector ref = io::interpolate_frf(*reference, est.freq);
  const bla::ScaledEstimate scaled = bla::scale_to_reference(est, ref);
  const bla::RatioView ratio = bla::ratio_to_reference(scaled.estimate, ref);
  return make_table(scaled.estimate, ref, ratio, scaled.factor);
}

void reproduce_bla_comparison(std::uint64_t seed, const std::filesystem::path& out_dir,
                              const ProtocolCounts& counts) {
  for (std::size_t s = 0; s < table_systems().size(); ++s) {
    for (seq::SignalClass cls : protocol_classes()) {
      const BlaTable table = bla_comparison_cell(static_cast<int>(s), cls, seed, counts);
      write_bla_table_csv(out_dir / ("bla_system" + std::to_string(s + 1) + "_" +
                                     seq::to_string(cls) + ".csv"),
                          table);
    }
  }
}

void reproduce_theorem_validation(std::uint64_t seed, const std::filesystem::path& out_dir,
                                  int instances) {
  const auto& sys = table_systems().front();
  const std::size_t n = 762;
  const CrossCorrelation eq_conv = theory::xcorr_rcs_cubic(sys.g, n);
  const CrossCorrelation eq_factored = theory::xcorr_rcs_cubic_factored(sys.g, n);

  Rng rng(derive_seed(seed, kTagTheorem));
  const wiener::WienerModel model = wiener::WienerModel::fir(sys.g, sys.nonlinearity);
  const CrossCorrelation mc = theory::monte_carlo_xcorr(model, n, instances, rng);

  std::string text = "lag,closed_form_eq3,closed_form_eq4,monte_carlo\n";
  for (std::size_t r = 0; r < n; ++r) {
    text += std::to_string(r);
    text += ',';
    text += fmt(eq_conv.values[r]);
    text += ',';
    text += fmt(eq_factored.values[r]);
    text += ',';
    text += fmt(mc.values[r]);
    text += '\n';
  }
  io::atomic_write_text(out_dir / "theorem_xcorr.csv", text);
}

void reproduce_clipper(double rms_level, std::uint64_t seed,
                       const std::filesystem::path& out_dir, const ClipperSetup& setup,
                       const ProtocolCounts& counts) {
  for (seq::SignalClass cls : protocol_classes()) {
    const BlaTable table = clipper_cell(cls, rms_level, seed, setup, counts);
    write_bla_table_csv(out_dir / ("clipper_rms" + fmt(rms_level, "%g") + "_" +
                                   seq::to_string(cls) + ".csv"),
                        table);
  }
}

void reproduce_measurement_pipeline(double rms_level, std::uint64_t seed,
                                    const std::filesystem::path& out_dir,
                                    int instances_per_class, const ClipperSetup& setup) {
  const wiener::WienerModel model = wiener::WienerModel::iir_lowpass(
      setup.cutoff_hz, setup.acquisition_rate_hz,
      wiener::Nonlinearity::hard_clip(setup.clip_threshold));
  const auto& filter = std::get<wiener::FirstOrderLowpass>(model.linear);

  // Stepped-sine style reference table on a log grid covering the excited band.
  io::SteppedSineTable reference;
  const int points = 240;
  const double f_lo = 10.0;
  const double f_hi = 20000.0;
  for (int i = 0; i < points; ++i) {
    const double f = f_lo * std::pow(f_hi / f_lo, static_cast<double>(i) / (points - 1));
    const dsp::cdouble h = filter.response(f);
    reference.freq_hz.push_back(f);
    reference.mag_db.push_back(20.0 * std::log10(std::abs(h)));
    reference.phase_deg.push_back(std::arg(h) * 180.0 / std::numbers::pi);
  }
  io::write_stepped_sine_frf(out_dir / "reference_stepped_sine.csv", reference);

  wiener::SimulateOptions options;
  options.oversample = setup.oversample;
  options.generator_rate_hz = setup.acquisition_rate_hz / setup.oversample;
  options.settle_periods = setup.settle_periods;
  options.n_periods = 2;
  options.include_transient = true;

  for (seq::SignalClass cls : protocol_classes()) {
    const std::uint64_t cell_seed = derive_seed(seed, kTagPipeline + class_index(cls));
    const auto realizations = paper_realizations(cls, instances_per_class, cell_seed);
    std::vector<std::filesystem::path> files;
    for (std::size_t i = 0; i < realizations.size(); ++i) {
      const WaveformRecord record =
          wiener::simulate(model, seq::normalize(realizations[i], rms_level), options);
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%03zu.csv", seq::to_string(cls).c_str(), i);
      const auto path = out_dir / "records" / name;
      io::write_record(path, record);
      files.push_back(path);
    }

    // Round-trip: estimate from the files just written, against the table file.
    std::vector<WaveformRecord> loaded;
    for (const auto& f : files) loaded.push_back(io::read_record(f));
    const io::SteppedSineTable table =
        io::read_stepped_sine_frf(out_dir / "reference_stepped_sine.csv");
    const BlaTable result = estimate_records(loaded, table, 4, cls, generator_period(cls));
    write_bla_table_csv(out_dir / ("pipeline_" + seq::to_string(cls) + ".csv"), result);
  }
}

std::vector<std::pair<seq::SignalClass, double>> gaussianity_kl(std::uint64_t seed,
                                                                const ProtocolCounts& counts) {
  const auto& sys = table_systems().at(1);  // memory-6 linear block
  const double target_rms = unit_gaussian_bla_rms(sys.g);
  std::vector<std::pair<seq::SignalClass, double>> out;
  for (seq::SignalClass cls : protocol_classes()) {
    const std::uint64_t cell_seed = derive_seed(seed, kTagGaussianity + class_index(cls));
    const auto realizations = paper_realizations(cls, counts.count_for(cls), cell_seed);
    std::vector<double> pool;
    pool.reserve(realizations.size() * generator_period(cls));
    for (const auto& r : realizations) {
      const auto x = wiener::fir_steady_state(sys.g, seq::normalize(r, target_rms).samples);
      pool.insert(pool.end(), x.begin(), x.end());
    }
    out.emplace_back(cls, stats::kl_vs_normal(pool));
  }
  return out;
}

void reproduce_gaussianity_table(std::uint64_t seed, const std::filesystem::path& out_dir,
                                 const ProtocolCounts& counts) {
  const auto rows = gaussianity_kl(seed, counts);
  std::string text = "class,kl_divergence\n";
  for (const auto& [cls, kl] : rows) {
    text += seq::to_string(cls) + "," + fmt(kl) + "\n";
  }
  io::atomic_write_text(out_dir / "gaussianity_kl.csv", text);
}

}  // namespace blakit::repro
