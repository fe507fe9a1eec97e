#include "adcsim/runner.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "adcsim/adc.hpp"
#include "adcsim/metrics.hpp"
#include "adcsim/stimuli.hpp"
#include "adcsim/version.hpp"

namespace adcsim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string command_name(Command command) {
  switch (command) {
    case Command::Convert:
      return "convert";
    case Command::Linearity:
      return "linearity";
    case Command::Spectrum:
      return "spectrum";
  }
  return "unknown";
}

// Refuses to clobber existing runs unless asked; called before any
// computation so a failed preflight leaves the directory untouched.
void preflight_outputs(const RunManifest& manifest,
                       const std::vector<std::string>& names) {
  fs::create_directories(manifest.output_dir);
  if (manifest.force) {
    return;
  }
  for (const std::string& name : names) {
    const fs::path target = manifest.output_dir / name;
    if (fs::exists(target)) {
      throw ConfigError("output file exists: " + target.string() +
                        " (use --force to overwrite)");
    }
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("short write to " + path.string());
  }
}

json db_value(const std::optional<double>& db) {
  if (!db) {
    return "unbounded";
  }
  return *db;
}

json db_rounded(const std::optional<double>& db) {
  if (!db) {
    return "unbounded";
  }
  return std::round(*db * 100.0) / 100.0;
}

void write_summary(const RunManifest& manifest, const ToolConfig& config,
                   const char* section, json body) {
  json summary;
  summary["version"] = kVersion;
  summary["command"] = command_name(manifest.command);
  summary["rng_seed"] = config.adc.rng_seed;
  summary["config"] = config.resolved;
  summary[section] = std::move(body);
  write_file(manifest.output_dir / "summary.json", summary.dump(2) + "\n");
}

std::string bits_string(const std::vector<std::uint8_t>& bits) {
  std::string text(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    text[i] = bits[i] ? '1' : '0';
  }
  return text;
}

std::vector<double> read_input_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open input file: " + path.string());
  }

  auto strip = [](std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t first = line.find_first_not_of(" \t");
    return first == std::string::npos ? std::string{} : line.substr(first);
  };

  std::string line;
  if (!std::getline(in, line) || strip(line) != "vin_v") {
    throw std::runtime_error("input file must start with a 'vin_v' header: " +
                             path.string());
  }

  std::vector<double> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string text = strip(line);
    if (text.empty()) {
      continue;
    }
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(value)) {
      throw std::runtime_error("input row " + std::to_string(row) +
                               " is not a finite voltage: '" + text + "'");
    }
    samples.push_back(value);
  }
  return samples;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buffer{};
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), v);
  return std::string(buffer.data(), result.ptr);
}

void run_convert(const RunManifest& manifest) {
  const ToolConfig config = load_config(manifest.config_path,
                                        manifest.overrides);
  preflight_outputs(manifest, {"codes.csv", "summary.json"});
  const std::vector<double> samples = read_input_csv(manifest.input_path);

  Pipeline pipeline(config.adc);
  std::vector<ConversionRecord> records;
  records.reserve(samples.size());
  for (double v : samples) {
    if (auto record = pipeline.step(v)) {
      records.push_back(std::move(*record));
    }
  }
  for (auto& record : pipeline.drain()) {
    records.push_back(std::move(record));
  }

  std::string csv = "sample_index,code,emit_cycle,bits\n";
  for (const ConversionRecord& record : records) {
    csv += std::to_string(record.sample_index);
    csv += ',';
    csv += std::to_string(record.code);
    csv += ',';
    csv += std::to_string(record.emit_cycle);
    csv += ',';
    csv += bits_string(record.bits);
    csv += '\n';
  }
  write_file(manifest.output_dir / "codes.csv", csv);

  json body;
  body["n_samples"] = samples.size();
  body["n_records"] = records.size();
  write_summary(manifest, config, "convert", std::move(body));

  std::cout << "converted " << samples.size() << " samples -> "
            << (manifest.output_dir / "codes.csv").string() << "\n";
}

void run_linearity(const RunManifest& manifest) {
  const ToolConfig config = load_config(manifest.config_path,
                                        manifest.overrides);
  preflight_outputs(manifest, {"linearity.csv", "summary.json"});

  const double resolution = config.adc.lsb() / 64.0;
  const LinearityReport report = linearity_report(config.adc, resolution);

  std::string csv = "code,transition_v,dnl_lsb,inl_lsb\n";
  for (std::size_t k = 0; k < report.transitions.size(); ++k) {
    csv += std::to_string(k + 1);
    csv += ',';
    csv += format_double(report.transitions[k]);
    csv += ',';
    if (k < report.dnl.size()) {
      csv += format_double(report.dnl[k]);
    }
    csv += ',';
    csv += format_double(report.inl[k]);
    csv += '\n';
  }
  write_file(manifest.output_dir / "linearity.csv", csv);

  json body;
  body["worst_dnl_lsb"] = report.worst_dnl;
  body["worst_inl_lsb"] = report.worst_inl;
  body["missing_codes"] = report.missing_codes;
  body["lsb_v"] = report.lsb;
  body["fitted_lsb_v"] = report.fitted_lsb;
  body["resolution_v"] = resolution;
  write_summary(manifest, config, "linearity", std::move(body));

  std::cout << "linearity: worst dnl " << format_double(report.worst_dnl)
            << " LSB, worst inl " << format_double(report.worst_inl)
            << " LSB, " << report.missing_codes.size() << " missing codes -> "
            << (manifest.output_dir / "linearity.csv").string() << "\n";
}

void run_spectrum(const RunManifest& manifest) {
  const ToolConfig config = load_config(manifest.config_path,
                                        manifest.overrides);
  preflight_outputs(manifest, {"spectrum.csv", "summary.json"});

  const std::size_t n_fft = config.fft.n_fft;
  const std::size_t cycles = config.fft.cycles;
  const References& refs = config.adc.refs;
  const double amplitude = config.fft.amplitude.value_or(
      default_sine_amplitude(refs.vrefp, refs.vrefn));
  if (amplitude == 0.0) {
    throw DegenerateError("stimulus amplitude is zero");
  }

  // Start the tone half a sample period into its cycle. At phase 0 the
  // very first sample sits exactly on the mid-scale comparator
  // threshold, so the tie-break rather than the signal picks that code;
  // the half-sample offset keeps every sample of the record in generic
  // position relative to the transition grid.
  const double phase = std::numbers::pi * static_cast<double>(cycles) /
                       static_cast<double>(n_fft);
  const double offset = 0.5 * (refs.vrefp + refs.vrefn);
  const Waveform wave =
      sine_coherent(n_fft, cycles, amplitude, offset, config.adc.sample_rate,
                    phase);

  const std::vector<ConversionRecord> records =
      convert_waveform(wave.samples, config.adc);
  std::vector<std::uint32_t> codes(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    codes[i] = records[i].code;
  }

  const SpectrumReport report = code_spectrum(codes, config.adc.n_bits,
                                              cycles);

  std::string csv = "bin,freq_hz,mag_dbfs\n";
  for (std::size_t bin = 0; bin < report.magnitudes_db.size(); ++bin) {
    csv += std::to_string(bin);
    csv += ',';
    csv += format_double(static_cast<double>(bin) * config.adc.sample_rate /
                         static_cast<double>(n_fft));
    csv += ',';
    csv += format_double(report.magnitudes_db[bin]);
    csv += '\n';
  }
  write_file(manifest.output_dir / "spectrum.csv", csv);

  json body;
  body["n_fft"] = n_fft;
  body["signal_bin"] = cycles;
  body["signal_freq_hz"] =
      tone_frequency(n_fft, cycles, config.adc.sample_rate);
  body["sndr_db"] = db_value(report.sndr_db);
  body["sndr_db_rounded"] = db_rounded(report.sndr_db);
  body["enob_bits"] =
      report.enob_bits ? json(*report.enob_bits) : json("unbounded");
  body["sfdr_db"] = db_value(report.sfdr_db);
  body["sfdr_db_rounded"] = db_rounded(report.sfdr_db);
  write_summary(manifest, config, "spectrum", std::move(body));

  std::cout << "spectrum: sndr ";
  if (report.sndr_db) {
    std::cout << format_double(std::round(*report.sndr_db * 100.0) / 100.0)
              << " dB, enob "
              << format_double(std::round(*report.enob_bits * 1000.0) / 1000.0)
              << " bits";
  } else {
    std::cout << "unbounded";
  }
  std::cout << " -> " << (manifest.output_dir / "spectrum.csv").string()
            << "\n";
}

int run_manifest(const RunManifest& manifest) {
  try {
    switch (manifest.command) {
      case Command::Convert:
        run_convert(manifest);
        break;
      case Command::Linearity:
        run_linearity(manifest);
        break;
      case Command::Spectrum:
        run_spectrum(manifest);
        break;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CoherenceError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace adcsim::cli
