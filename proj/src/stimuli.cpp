#include "adcsim/stimuli.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace adcsim {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidInputError(std::string(name) + " must be finite");
  }
}

void require_rate(double sample_rate) {
  require_finite(sample_rate, "sample_rate_hz");
  if (!(sample_rate > 0.0)) {
    throw InvalidInputError("sample_rate_hz must be positive");
  }
}

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Waveform ramp(std::size_t n, double v0, double v1, double sample_rate) {
  require_rate(sample_rate);
  require_finite(v0, "v0");
  require_finite(v1, "v1");
  if (n < 2) {
    throw InvalidInputError("ramp needs at least 2 samples");
  }

  Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.resize(n);
  const double step = (v1 - v0) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    wave.samples[k] = v0 + static_cast<double>(k) * step;
  }
  wave.samples.back() = v1;  // exact endpoint regardless of step rounding
  return wave;
}

Waveform sine_coherent(std::size_t n_fft, std::size_t cycles,
                       double amplitude, double offset, double sample_rate,
                       double phase, std::size_t n_samples) {
  require_rate(sample_rate);
  require_finite(amplitude, "amplitude");
  require_finite(offset, "offset");
  require_finite(phase, "phase");
  if (!power_of_two(n_fft) || n_fft < 4) {
    throw InvalidInputError("n_fft must be a power of two, at least 4");
  }
  if (cycles < 1 || cycles >= n_fft / 2) {
    throw InvalidInputError("cycles must be in [1, n_fft / 2)");
  }
  if (std::gcd(cycles, n_fft) != 1) {
    throw CoherenceError(
        "cycles must be coprime to n_fft (odd, for a power-of-two record)");
  }

  const std::size_t n = n_samples == 0 ? n_fft : n_samples;
  Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.resize(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < n; ++k) {
    // Reduce the angle index mod n_fft so block m repeats block 0 exactly.
    const std::size_t idx = (cycles % n_fft) * (k % n_fft) % n_fft;
    const double angle =
        two_pi * static_cast<double>(idx) / static_cast<double>(n_fft) + phase;
    wave.samples[k] = offset + amplitude * std::sin(angle);
  }
  return wave;
}

Waveform dc(std::size_t n, double v, double sample_rate) {
  require_rate(sample_rate);
  require_finite(v, "v");
  if (n == 0) {
    throw InvalidInputError("dc needs at least 1 sample");
  }
  Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.assign(n, v);
  return wave;
}

}  // namespace adcsim
