#include "adcsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "adcsim/stimuli.hpp"

namespace adcsim {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Signed value of largest magnitude. On a magnitude tie the negative
// entry wins: a fully shrunk code (dnl -1) is the harder failure than
// an equally widened one, and reports quote it with its sign.
double worst_of(const std::vector<double>& values) {
  double worst = 0.0;
  for (double v : values) {
    if (std::abs(v) > std::abs(worst) ||
        (std::abs(v) == std::abs(worst) && v < worst)) {
      worst = v;
    }
  }
  return worst;
}

void check_signal_bin(const OneSidedSpectrum& spectrum,
                      std::size_t signal_bin) {
  if (spectrum.power.size() < 2) {
    throw InvalidInputError("spectrum has no non-DC bins");
  }
  if (signal_bin < 1 || signal_bin >= spectrum.power.size()) {
    throw InvalidInputError("signal_bin must be a non-DC bin of the spectrum");
  }
}

}  // namespace

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x) {
  const std::size_t n = x.size();
  if (!power_of_two(n)) {
    throw InvalidInputError("fft length must be a power of two");
  }
  if (n == 1) {
    return x;
  }

  // Bit-reversal reorder, then in-place butterflies of doubling span.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) {
      j ^= bit;
    }
    j ^= bit;
    if (i < j) {
      std::swap(x[i], x[j]);
    }
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> w =
            std::polar(1.0, ang * static_cast<double>(j));
        const std::complex<double> u = x[base + j];
        const std::complex<double> t = w * x[base + j + len / 2];
        x[base + j] = u + t;
        x[base + j + len / 2] = u - t;
      }
    }
  }
  return x;
}

OneSidedSpectrum fft_magnitude(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (!power_of_two(n) || n < 8) {
    throw InvalidInputError(
        "record length must be a power of two, at least 8");
  }

  std::vector<std::complex<double>> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = samples[k];
  }
  x = fft(std::move(x));

  OneSidedSpectrum spectrum;
  spectrum.n_fft = n;
  spectrum.power.resize(n / 2 + 1);
  spectrum.magnitude_db.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    // Interior bins carry the mirrored half too; DC and Nyquist do not.
    const double fold = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    const double amp = fold * std::abs(x[k]) / static_cast<double>(n);
    const double power = amp * amp;
    spectrum.power[k] = power;
    spectrum.magnitude_db[k] =
        power < kDbFloorPower ? kDbFloor : 10.0 * std::log10(power);
  }
  return spectrum;
}

std::optional<double> sndr(const OneSidedSpectrum& spectrum,
                           std::size_t signal_bin) {
  check_signal_bin(spectrum, signal_bin);
  const double p_signal = spectrum.power[signal_bin];
  if (p_signal == 0.0) {
    throw DegenerateError("no power in the signal bin");
  }
  double p_rest = 0.0;
  for (std::size_t k = 1; k < spectrum.power.size(); ++k) {
    if (k != signal_bin) {
      p_rest += spectrum.power[k];
    }
  }
  if (p_rest == 0.0) {
    return std::nullopt;  // unbounded: nothing outside the signal bin
  }
  return 10.0 * std::log10(p_signal / p_rest);
}

double enob(double sndr_db) {
  if (!std::isfinite(sndr_db)) {
    throw InvalidInputError("sndr_db must be finite");
  }
  return (sndr_db - 1.76) / 6.02;
}

std::optional<double> sfdr(const OneSidedSpectrum& spectrum,
                           std::size_t signal_bin) {
  check_signal_bin(spectrum, signal_bin);
  const double p_signal = spectrum.power[signal_bin];
  if (p_signal == 0.0) {
    throw DegenerateError("no power in the signal bin");
  }
  double p_spur = 0.0;
  for (std::size_t k = 1; k < spectrum.power.size(); ++k) {
    if (k != signal_bin) {
      p_spur = std::max(p_spur, spectrum.power[k]);
    }
  }
  if (p_spur == 0.0) {
    return std::nullopt;
  }
  return 10.0 * std::log10(p_signal / p_spur);
}

TransitionScan find_transitions(const AdcConfig& config, double resolution) {
  config.validate();
  const double lsb = config.lsb();
  if (!std::isfinite(resolution) || !(resolution > 0.0) ||
      resolution > lsb / 16.0) {
    throw InvalidInputError(
        "resolution must be positive and at most LSB / 16");
  }

  const double span = config.refs.full_scale();
  const auto steps =
      static_cast<std::size_t>(std::llround(span / resolution));
  const Waveform sweep = ramp(steps + 1, config.refs.vrefn, config.refs.vrefp,
                              config.sample_rate);
  const std::vector<ConversionRecord> records =
      convert_waveform(sweep.samples, config);

  std::vector<std::uint32_t> codes(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) {
    codes[j] = records[j].code;
  }
  if (std::all_of(codes.begin(), codes.end(),
                  [&](std::uint32_t c) { return c == codes.front(); })) {
    throw DegenerateError("converter output is stuck at a single code");
  }

  const std::uint32_t top = config.max_code();
  TransitionScan scan;
  scan.transitions.resize(top);
  std::vector<char> seen(static_cast<std::size_t>(top) + 1, 0);

  // Single ascending pass: T(k) is the midpoint of the sweep step on
  // which the output first reached at least k.
  std::int64_t prev_max = -1;
  for (std::size_t j = 0; j < codes.size(); ++j) {
    const std::uint32_t c = codes[j];
    seen[c] = 1;
    if (static_cast<std::int64_t>(c) > prev_max) {
      const double crossing =
          j == 0 ? sweep.samples[0]
                 : 0.5 * (sweep.samples[j - 1] + sweep.samples[j]);
      for (std::int64_t k = prev_max + 1; k <= static_cast<std::int64_t>(c);
           ++k) {
        if (k >= 1) {
          scan.transitions[static_cast<std::size_t>(k) - 1] = crossing;
        }
      }
      prev_max = static_cast<std::int64_t>(c);
    }
  }
  // Codes above everything the sweep reached hold the last realized
  // transition, so their widths collapse to zero instead of inventing
  // levels beyond vrefp.
  for (std::int64_t k = prev_max + 1; k <= static_cast<std::int64_t>(top);
       ++k) {
    scan.transitions[static_cast<std::size_t>(k) - 1] =
        scan.transitions[static_cast<std::size_t>(prev_max) - 1];
  }

  for (std::uint32_t k = 0; k <= top; ++k) {
    if (!seen[k]) {
      scan.missing_codes.push_back(k);
    }
  }
  return scan;
}

std::vector<double> dnl(const std::vector<double>& transitions, double lsb) {
  if (transitions.size() < 3) {
    throw InvalidInputError("dnl needs at least 3 transitions");
  }
  if (!std::isfinite(lsb) || !(lsb > 0.0)) {
    throw InvalidInputError("lsb must be positive");
  }
  std::vector<double> out(transitions.size() - 1);
  for (std::size_t k = 0; k + 1 < transitions.size(); ++k) {
    out[k] = (transitions[k + 1] - transitions[k]) / lsb - 1.0;
  }
  return out;
}

std::vector<double> inl(const std::vector<double>& transitions) {
  if (transitions.size() < 2) {
    throw InvalidInputError("inl needs at least 2 transitions");
  }
  const double span = transitions.back() - transitions.front();
  if (span == 0.0) {
    throw DegenerateError("transition span is zero");
  }
  const double fitted =
      span / static_cast<double>(transitions.size() - 1);
  std::vector<double> out(transitions.size());
  for (std::size_t k = 0; k < transitions.size(); ++k) {
    out[k] = (transitions[k] - transitions.front() -
              static_cast<double>(k) * fitted) /
             fitted;
  }
  // The fit passes through both endpoints by definition; pinning them
  // removes the +/-1 ulp residue the division above can leave.
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

LinearityReport linearity_report(const AdcConfig& config, double resolution) {
  TransitionScan scan = find_transitions(config, resolution);

  LinearityReport report;
  report.lsb = config.lsb();
  report.transitions = std::move(scan.transitions);
  report.missing_codes = std::move(scan.missing_codes);
  report.dnl = dnl(report.transitions, report.lsb);
  report.inl = inl(report.transitions);
  report.worst_dnl = worst_of(report.dnl);
  report.worst_inl = worst_of(report.inl);
  report.fitted_lsb = (report.transitions.back() - report.transitions.front()) /
                      static_cast<double>(report.transitions.size() - 1);
  return report;
}

SpectrumReport code_spectrum(const std::vector<std::uint32_t>& codes,
                             int n_bits, std::size_t signal_bin) {
  if (n_bits < 1 || n_bits > 24) {
    throw InvalidInputError("n_bits must be in [1, 24]");
  }

  double mean = 0.0;
  for (std::uint32_t c : codes) {
    mean += static_cast<double>(c);
  }
  mean /= static_cast<double>(codes.empty() ? 1 : codes.size());

  const double half_span = static_cast<double>(1u << (n_bits - 1));
  std::vector<double> centered(codes.size());
  for (std::size_t k = 0; k < codes.size(); ++k) {
    centered[k] = (static_cast<double>(codes[k]) - mean) / half_span;
  }

  SpectrumReport report;
  report.n_fft = codes.size();
  report.signal_bin = signal_bin;
  const OneSidedSpectrum spectrum = fft_magnitude(centered);
  report.magnitudes_db = spectrum.magnitude_db;
  report.sndr_db = sndr(spectrum, signal_bin);
  if (report.sndr_db) {
    report.enob_bits = enob(*report.sndr_db);
  }
  report.sfdr_db = sfdr(spectrum, signal_bin);
  return report;
}

}  // namespace adcsim
