#pragma once

#include <cstddef>
#include <vector>

#include "adcsim/errors.hpp"

namespace adcsim {

struct Waveform {
  double sample_rate = 0.0;
  std::vector<double> samples;
};

/// n evenly spaced samples from v0 to v1 inclusive. Endpoints are exact.
Waveform ramp(std::size_t n, double v0, double v1, double sample_rate);

/// Coherent sine for windowless FFT work: exactly `cycles` periods per
/// n_fft samples. Requires power-of-two n_fft, 1 <= cycles < n_fft / 2
/// and gcd(cycles, n_fft) == 1, which for a power of two just means an
/// odd cycle count. The phase argument is sample 0's phase in radians.
/// n_samples == 0 means one record of n_fft samples; longer runs repeat
/// the block exactly because the angle index is reduced mod n_fft.
Waveform sine_coherent(std::size_t n_fft, std::size_t cycles,
                       double amplitude, double offset, double sample_rate,
                       double phase = 0.0, std::size_t n_samples = 0);

Waveform dc(std::size_t n, double v, double sample_rate);

inline double tone_frequency(std::size_t n_fft, std::size_t cycles,
                             double sample_rate) {
  return static_cast<double>(cycles) * sample_rate /
         static_cast<double>(n_fft);
}

/// Near-full-scale test amplitude: half the reference span backed off by
/// 2^-12 so the peaks stay a hair inside the conversion range.
inline double default_sine_amplitude(double vrefp, double vrefn) {
  return 0.5 * (vrefp - vrefn) * (1.0 - 0x1p-12);
}

}  // namespace adcsim
