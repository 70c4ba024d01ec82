// Command line front end: excitation generation, BLA estimation from record
// files, and the canned comparison/validation bundles.
//
// Exit codes: 0 success, 2 validation/usage error, 1 internal error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blakit/experiments.hpp"
#include "blakit/sequences.hpp"
#include "blakit/theory.hpp"
#include "blakit/waveform_io.hpp"

namespace {

using namespace blakit;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

struct GenerateArgs {
  std::string signal_class;
  int order = 0;
  std::vector<int> taps;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double sigma = 1.0;
  double rms = 0.0;  // 0 = keep generated scale
  int candidates = 32;
  std::string out;
};

int run_generate(const GenerateArgs& args) {
  const seq::SignalClass cls = seq::signal_class_from_string(args.signal_class);
  Rng rng(args.seed);
  seq::ExcitationSignal signal;
  std::vector<int> taps = args.taps;
  switch (cls) {
    case seq::SignalClass::kMlbs:
    case seq::SignalClass::kIrmlbs:
    case seq::SignalClass::kDs: {
      if (args.order == 0) {
        throw std::invalid_argument("--order is required for mlbs/irmlbs/ds");
      }
      if (taps.empty()) taps = seq::default_taps(args.order);
      if (cls == seq::SignalClass::kMlbs) {
        signal = seq::mlbs(args.order, taps, args.amplitude);
      } else if (cls == seq::SignalClass::kIrmlbs) {
        signal = seq::irmlbs(args.order, taps, args.amplitude);
      } else {
        signal = seq::ds_ternary(seq::mlbs(args.order, taps, 1.0), args.amplitude);
      }
      break;
    }
    case seq::SignalClass::kRcs:
      if (args.n == 0) throw std::invalid_argument("--n is required for rcs");
      signal = seq::rcs(args.n, rng, args.candidates, args.amplitude);
      break;
    case seq::SignalClass::kWgn:
      if (args.n == 0) throw std::invalid_argument("--n is required for wgn");
      signal = seq::wgn(args.n, rng, args.sigma);
      break;
    case seq::SignalClass::kRandomBinary:
      if (args.n == 0) throw std::invalid_argument("--n is required for random-binary");
      signal = seq::random_binary(args.n, rng, args.amplitude);
      break;
  }
  if (args.rms > 0.0) signal = seq::normalize(signal, args.rms);
  io::write_signal_csv(args.out, signal, args.seed, taps);
  std::cout << "wrote " << args.out << " (" << signal.n() << " samples, class "
            << seq::to_string(signal.signal_class) << ", rms " << signal.rms << ")\n";
  return kExitOk;
}

struct ReproduceArgs {
  std::string figure;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  double rms = 1.0;
  int instances = 0;  // 0 = per-figure default
};

int run_reproduce(const ReproduceArgs& args) {
  const std::filesystem::path dir(args.out_dir);
  if (args.figure == "fig2" || args.figure == "fig3") {
    // One bundle serves both views: fig2 reads the magnitude/std columns,
    // fig3 the ratio/phase columns.
    repro::reproduce_bla_comparison(args.seed, dir);
  } else if (args.figure == "fig4") {
    repro::reproduce_theorem_validation(args.seed, dir,
                                        args.instances > 0 ? args.instances : 1000);
  } else if (args.figure == "fig5") {
    repro::reproduce_clipper(args.rms, args.seed, dir);
  } else if (args.figure == "fig6-sim") {
    repro::reproduce_measurement_pipeline(args.rms, args.seed, dir,
                                          args.instances > 0 ? args.instances : 8);
  } else if (args.figure == "table2") {
    repro::reproduce_gaussianity_table(args.seed, dir);
  } else {
    throw std::invalid_argument("unknown figure id '" + args.figure +
                                "' (expected fig2, fig3, fig4, fig5, fig6-sim, table2)");
  }
  std::cout << "wrote bundle '" << args.figure << "' to " << dir.string() << "\n";
  return kExitOk;
}

struct EstimateArgs {
  std::vector<std::string> records;
  std::string reference;
  int group_size = 4;
  std::string signal_class;  // override; default: first record's metadata
  std::size_t gen_period = 0;
  std::size_t period_len = 0;
  double fs = 0.0;
  std::string out;
};

int run_estimate(const EstimateArgs& args) {
  if (args.records.size() < static_cast<std::size_t>(args.group_size)) {
    throw std::invalid_argument(std::to_string(args.records.size()) +
                                " records cannot fill a group of " +
                                std::to_string(args.group_size));
  }
  std::vector<WaveformRecord> records;
  for (const auto& path : args.records) {
    WaveformRecord r = io::read_record(path);
    if (args.period_len != 0) {
      r.period_len = args.period_len;
      r.n_periods = static_cast<int>(r.input.size() / r.period_len) - r.discard_periods;
      if (r.n_periods < 1) {
        throw std::invalid_argument(path + ": period override leaves no usable periods");
      }
    }
    if (args.fs > 0.0) r.sample_rate_hz = args.fs;
    records.push_back(std::move(r));
  }
  const std::size_t n = records.front().period_len;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].period_len != n) {
      throw std::invalid_argument("records have mismatched period lengths (" +
                                  std::to_string(records[i].period_len) + " vs " +
                                  std::to_string(n) + ")");
    }
  }

  seq::SignalClass cls = seq::SignalClass::kWgn;  // all-bins rule by default
  if (!args.signal_class.empty()) {
    cls = seq::signal_class_from_string(args.signal_class);
  } else if (!records.front().signal_class.empty()) {
    cls = seq::signal_class_from_string(records.front().signal_class);
  }
  std::size_t gen_period = args.gen_period;
  if (gen_period == 0) gen_period = records.front().generator_period;
  if (gen_period == 0) gen_period = n;

  std::optional<io::SteppedSineTable> reference;
  if (!args.reference.empty()) reference = io::read_stepped_sine_frf(args.reference);

  const repro::BlaTable table =
      repro::estimate_records(records, reference, args.group_size, cls, gen_period);
  repro::write_bla_table_csv(args.out, table);
  std::cout << "wrote " << args.out << " (" << table.freq.size() << " excited bins, "
            << records.size() / args.group_size << " groups)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BLA measurement toolkit: multilevel excitation sequences, Wiener-system "
               "simulation, and best-linear-approximation estimation"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate one excitation period as CSV");
  generate->add_option("--class", gen.signal_class,
                       "mlbs | irmlbs | ds | rcs | wgn | random-binary")->required();
  generate->add_option("--order", gen.order, "LFSR order (mlbs/irmlbs, or the ds base)");
  generate->add_option("--taps", gen.taps, "feedback taps, e.g. --taps 9 5")->delimiter(',');
  generate->add_option("--n", gen.n, "sequence length (rcs/wgn/random-binary)");
  generate->add_option("--seed", gen.seed, "random seed");
  generate->add_option("--amplitude", gen.amplitude, "level amplitude");
  generate->add_option("--sigma", gen.sigma, "wgn standard deviation");
  generate->add_option("--rms", gen.rms, "normalize to this RMS after generation");
  generate->add_option("--candidates", gen.candidates, "rcs spectral-flatness candidates");
  generate->add_option("--out", gen.out, "output CSV path")->required();

  ReproduceArgs rep;
  auto* reproduce = app.add_subcommand(
      "reproduce", "Write a deterministic result bundle (fig2 fig3 fig4 fig5 fig6-sim table2)");
  reproduce->add_option("figure", rep.figure, "bundle id")->required();
  reproduce->add_option("--seed", rep.seed, "master seed");
  reproduce->add_option("--out-dir", rep.out_dir, "output directory");
  reproduce->add_option("--rms", rep.rms, "input RMS level (fig5, fig6-sim)");
  reproduce->add_option("--instances", rep.instances,
                        "instance count override (fig4 Monte Carlo, fig6-sim per class)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the BLA from waveform records");
  estimate->add_option("records", est.records, "record CSV files")->required();
  estimate->add_option("--reference", est.reference, "stepped-sine FRF table CSV");
  estimate->add_option("--group-size", est.group_size, "realizations per group");
  estimate->add_option("--class", est.signal_class, "excited-bin rule override");
  estimate->add_option("--gen-period", est.gen_period, "generator-rate period override");
  estimate->add_option("--period-len", est.period_len, "period length override");
  estimate->add_option("--fs", est.fs, "sample rate override [Hz]");
  estimate->add_option("--out", est.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
    if (generate->parsed()) return run_generate(gen);
    if (reproduce->parsed()) return run_reproduce(rep);
    if (estimate->parsed()) return run_estimate(est);
    return kExitValidation;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
