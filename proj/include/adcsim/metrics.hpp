#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "adcsim/adc.hpp"
#include "adcsim/errors.hpp"

namespace adcsim {

// Power below this reports as the kDbFloor floor instead of -inf.
inline constexpr double kDbFloorPower = 1e-30;
inline constexpr double kDbFloor = -300.0;

/// In-place iterative radix-2 decimation-in-time FFT. Length must be a
/// power of two (length 1 is allowed and is the identity).
std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x);

/// One-sided amplitude spectrum of a real record, n / 2 + 1 bins.
/// Amplitudes are |X_k| / n doubled for interior bins so a full-scale
/// tone reads 1.0; power is the squared amplitude and magnitude_db is
/// 10*log10(power) floored at kDbFloor.
struct OneSidedSpectrum {
  std::size_t n_fft = 0;
  std::vector<double> power;
  std::vector<double> magnitude_db;
};

OneSidedSpectrum fft_magnitude(const std::vector<double>& samples);

/// Signal power over everything else (bins 1..n/2 minus the signal bin),
/// in dB. Returns nullopt when there is no power outside the signal bin:
/// the ratio is unbounded, not infinite noise performance at 0 dB.
std::optional<double> sndr(const OneSidedSpectrum& spectrum,
                           std::size_t signal_bin);

/// (sndr_db - 1.76) / 6.02
double enob(double sndr_db);

/// Signal over the largest non-DC spur, in dB; nullopt when spurless.
std::optional<double> sfdr(const OneSidedSpectrum& spectrum,
                           std::size_t signal_bin);

/// Code transition levels found by sweeping a fine ramp across the
/// reference span. transitions[k - 1] is T(k), the input voltage at
/// which the output first reaches code k, taken as the midpoint of the
/// last sweep step that crossed it. Codes the sweep never reached get
/// the last realized transition so DNL shows the gap; codes skipped
/// inside the range are also listed in missing_codes.
struct TransitionScan {
  std::vector<double> transitions;
  std::vector<std::uint32_t> missing_codes;
};

TransitionScan find_transitions(const AdcConfig& config, double resolution);

/// DNL in LSB: dnl[k] = (T(k+2) - T(k+1)) / lsb - 1.
std::vector<double> dnl(const std::vector<double>& transitions, double lsb);

/// Endpoint-corrected INL in fitted-LSB units. The straight line through
/// the first and last transitions defines the fit, so both endpoints are
/// zero by construction.
std::vector<double> inl(const std::vector<double>& transitions);

struct LinearityReport {
  std::vector<double> transitions;
  std::vector<double> dnl;
  std::vector<double> inl;
  double worst_dnl = 0.0;  // signed value of largest magnitude
  double worst_inl = 0.0;
  std::vector<std::uint32_t> missing_codes;
  double lsb = 0.0;
  double fitted_lsb = 0.0;
};

LinearityReport linearity_report(const AdcConfig& config, double resolution);

struct SpectrumReport {
  std::size_t n_fft = 0;
  std::vector<double> magnitudes_db;
  std::size_t signal_bin = 0;
  std::optional<double> sndr_db;  // nullopt = unbounded
  std::optional<double> enob_bits;
  std::optional<double> sfdr_db;
};

/// Spectral figures of a captured code record: codes are centered on
/// their mean and scaled by 2^(n_bits - 1) so a full-span sine maps to
/// a 0 dBFS tone, then analyzed with fft_magnitude.
SpectrumReport code_spectrum(const std::vector<std::uint32_t>& codes,
                             int n_bits, std::size_t signal_bin);

}  // namespace adcsim
