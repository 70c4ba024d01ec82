#include "blakit/waveform_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace blakit::io {
namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double parse_double(std::string_view text, const std::filesystem::path& path,
                    std::size_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                ": malformed numeric field '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

WaveformRecord read_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open record file '" + path.string() + "'");

  WaveformRecord record;
  bool have_period_len = false;
  bool have_n_periods = false;
  int columns = 0;  // 2 = input,output; 3 = t,input,output
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view body(line);
      body.remove_prefix(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) continue;  // free-form comment
      const std::string key(body.substr(0, eq));
      const std::string value(body.substr(eq + 1));
      if (key == "fs") {
        record.sample_rate_hz = parse_double(value, path, line_no);
      } else if (key == "period_len") {
        record.period_len = static_cast<std::size_t>(parse_double(value, path, line_no));
        have_period_len = true;
      } else if (key == "n_periods") {
        record.n_periods = static_cast<int>(parse_double(value, path, line_no));
        have_n_periods = true;
      } else if (key == "discard_periods") {
        record.discard_periods = static_cast<int>(parse_double(value, path, line_no));
      } else if (key == "class") {
        record.signal_class = value;
      } else if (key == "gen_period") {
        record.generator_period = static_cast<std::size_t>(parse_double(value, path, line_no));
      }
      continue;
    }
    if (columns == 0) {
      // Header row.
      const auto fields = split_csv(line);
      if (fields.size() == 3 && fields[0] == "t" && fields[1] == "input" &&
          fields[2] == "output") {
        columns = 3;
      } else if (fields.size() == 2 && fields[0] == "input" && fields[1] == "output") {
        columns = 2;
      } else {
        throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                    ": expected header 't,input,output' or 'input,output'");
      }
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != static_cast<std::size_t>(columns)) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns) + " columns, found " +
                                  std::to_string(fields.size()));
    }
    record.input.push_back(parse_double(fields[columns - 2], path, line_no));
    record.output.push_back(parse_double(fields[columns - 1], path, line_no));
  }
  if (columns == 0) {
    throw std::invalid_argument(path.string() + ": no header row found");
  }

  if (!have_period_len) record.period_len = record.input.size();
  if (!have_n_periods) {
    record.n_periods =
        record.period_len == 0
            ? 0
            : static_cast<int>(record.input.size() / record.period_len) - record.discard_periods;
  }
  if (record.period_len == 0 || record.n_periods < 1) {
    throw std::invalid_argument(path.string() + ": record declares no usable periods");
  }
  if (record.input.size() < record.samples_declared()) {
    throw std::invalid_argument(
        path.string() + ": " + std::to_string(record.input.size()) +
        " samples do not cover the declared " + std::to_string(record.samples_declared()));
  }
  return record;
}

void write_record(const std::filesystem::path& path, const WaveformRecord& record,
                  bool with_time_column) {
  if (record.input.size() != record.output.size()) {
    throw std::invalid_argument("write_record: input/output length mismatch");
  }
  std::string text;
  text.reserve(record.input.size() * 48 + 256);
  text += "# fs=" + fmt(record.sample_rate_hz) + "\n";
  text += "# period_len=" + std::to_string(record.period_len) + "\n";
  text += "# n_periods=" + std::to_string(record.n_periods) + "\n";
  text += "# discard_periods=" + std::to_string(record.discard_periods) + "\n";
  if (!record.signal_class.empty()) text += "# class=" + record.signal_class + "\n";
  if (record.generator_period != 0) {
    text += "# gen_period=" + std::to_string(record.generator_period) + "\n";
  }
  text += with_time_column ? "t,input,output\n" : "input,output\n";
  for (std::size_t i = 0; i < record.input.size(); ++i) {
    if (with_time_column) {
      text += fmt(static_cast<double>(i) / record.sample_rate_hz);
      text += ',';
    }
    text += fmt(record.input[i]);
    text += ',';
    text += fmt(record.output[i]);
    text += '\n';
  }
  atomic_write_text(path, text);
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
segment(const WaveformRecord& record) {
  if (record.input.size() != record.output.size()) {
    throw std::invalid_argument("segment: input/output length mismatch");
  }
  if (record.input.size() < record.samples_declared()) {
    throw std::invalid_argument("segment: record shorter than its declared periods");
  }
  std::vector<std::vector<double>> u_periods;
  std::vector<std::vector<double>> y_periods;
  u_periods.reserve(record.n_periods);
  y_periods.reserve(record.n_periods);
  const std::size_t offset =
      static_cast<std::size_t>(record.discard_periods) * record.period_len;
  for (int p = 0; p < record.n_periods; ++p) {
    const std::size_t begin = offset + static_cast<std::size_t>(p) * record.period_len;
    u_periods.emplace_back(record.input.begin() + begin,
                           record.input.begin() + begin + record.period_len);
    y_periods.emplace_back(record.output.begin() + begin,
                           record.output.begin() + begin + record.period_len);
  }
  return {std::move(u_periods), std::move(y_periods)};
}

std::vector<double> hold_upsample(std::span<const double> x, int factor) {
  if (factor < 1) throw std::invalid_argument("hold_upsample: factor must be >= 1");
  std::vector<double> out;
  out.reserve(x.size() * static_cast<std::size_t>(factor));
  for (double v : x) {
    for (int j = 0; j < factor; ++j) out.push_back(v);
  }
  return out;
}

std::vector<double> decimate(std::span<const double> x, int factor) {
  if (factor < 1) throw std::invalid_argument("decimate: factor must be >= 1");
  std::vector<double> out;
  out.reserve((x.size() + factor - 1) / factor);
  for (std::size_t i = 0; i < x.size(); i += static_cast<std::size_t>(factor)) {
    out.push_back(x[i]);
  }
  return out;
}

SteppedSineTable read_stepped_sine_frf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open FRF table '" + path.string() + "'");
  SteppedSineTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "freq_hz,mag_db,phase_deg") {
        throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                    ": expected header 'freq_hz,mag_db,phase_deg'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected 3 columns");
    }
    table.freq_hz.push_back(parse_double(fields[0], path, line_no));
    table.mag_db.push_back(parse_double(fields[1], path, line_no));
    table.phase_deg.push_back(parse_double(fields[2], path, line_no));
  }
  if (table.freq_hz.size() < 2) {
    throw std::invalid_argument(path.string() + ": FRF table needs at least two rows");
  }
  for (std::size_t i = 1; i < table.freq_hz.size(); ++i) {
    if (!(table.freq_hz[i] > table.freq_hz[i - 1])) {
      throw std::invalid_argument(path.string() +
                                  ": frequency column must be strictly increasing");
    }
  }
  return table;
}

void write_stepped_sine_frf(const std::filesystem::path& path, const SteppedSineTable& table) {
  std::string text = "freq_hz,mag_db,phase_deg\n";
  for (std::size_t i = 0; i < table.freq_hz.size(); ++i) {
    text += fmt(table.freq_hz[i]);
    text += ',';
    text += fmt(table.mag_db[i]);
    text += ',';
    text += fmt(table.phase_deg[i]);
    text += '\n';
  }
  atomic_write_text(path, text);
}

dsp::cvector interpolate_frf(const SteppedSineTable& table,
                             std::span<const double> target_freq_hz) {
  // Unwrap the phase so linear interpolation never crosses a 360-degree seam.
  std::vector<double> phase = table.phase_deg;
  for (std::size_t i = 1; i < phase.size(); ++i) {
    while (phase[i] - phase[i - 1] > 180.0) phase[i] -= 360.0;
    while (phase[i] - phase[i - 1] < -180.0) phase[i] += 360.0;
  }

  dsp::cvector out;
  out.reserve(target_freq_hz.size());
  for (double f : target_freq_hz) {
    if (f < table.freq_hz.front() || f > table.freq_hz.back()) {
      throw std::invalid_argument("interpolate_frf: frequency " + fmt(f, "%.6g") +
                                  " Hz outside the table range (no extrapolation)");
    }
    const auto upper = std::lower_bound(table.freq_hz.begin(), table.freq_hz.end(), f);
    std::size_t hi = static_cast<std::size_t>(upper - table.freq_hz.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double t = (f - table.freq_hz[lo]) / (table.freq_hz[hi] - table.freq_hz[lo]);
    const double mag_db = table.mag_db[lo] + t * (table.mag_db[hi] - table.mag_db[lo]);
    const double ph_deg = phase[lo] + t * (phase[hi] - phase[lo]);
    out.push_back(std::polar(std::pow(10.0, mag_db / 20.0),
                             ph_deg * std::numbers::pi / 180.0));
  }
  return out;
}

void write_signal_csv(const std::filesystem::path& path, const seq::ExcitationSignal& signal,
                      std::uint64_t seed, const std::vector<int>& taps) {
  std::string text = "index,value\n";
  text.reserve(signal.n() * 28 + 16);
  for (std::size_t i = 0; i < signal.n(); ++i) {
    text += std::to_string(i);
    text += ',';
    text += fmt(signal.samples[i]);
    text += '\n';
  }
  atomic_write_text(path, text);

  double amplitude = 0.0;
  for (double level : signal.levels) amplitude = std::max(amplitude, std::abs(level));
  if (signal.levels.empty()) amplitude = signal.rms;

  nlohmann::json meta;
  meta["class"] = seq::to_string(signal.signal_class);
  meta["n"] = signal.n();
  meta["amplitude"] = amplitude;
  meta["levels"] = signal.levels;
  meta["rms"] = signal.rms;
  meta["seed"] = seed;
  meta["taps"] = taps;
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  atomic_write_text(sidecar, meta.dump(2) + "\n");
}

}  // namespace blakit::io
