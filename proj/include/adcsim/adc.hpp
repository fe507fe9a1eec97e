#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "adcsim/errors.hpp"

namespace adcsim {

/// Reference voltages shared by every stage. vth is the comparator
/// threshold before any per-stage offset; it defaults to the midpoint
/// of the reference span.
struct References {
  double vrefp = 1.0;
  double vrefn = -1.0;
  double vth = 0.0;

  References() = default;
  References(double p, double n) : vrefp(p), vrefn(n), vth(0.5 * (p + n)) {}
  References(double p, double n, double th) : vrefp(p), vrefn(n), vth(th) {}

  void validate() const;
  double full_scale() const { return vrefp - vrefn; }
  double lsb(int n_bits) const;
};

/// One stage's analog imperfections. An absent dc_gain means an ideal
/// (infinite-gain) residue amplifier. cap_ratio is C1/C2 of the
/// switched-capacitor MDAC; 1.0 gives the nominal x2 interstage gain.
struct StageParams {
  double cap_ratio = 1.0;
  std::optional<double> dc_gain;
  double comparator_offset = 0.0;
  double rail_low = -5.0;
  double rail_high = 5.0;

  void validate() const;
};

/// 10^(db/20)
double db_to_linear_gain(double db);

struct AdcConfig {
  int n_bits = 8;
  References refs;
  double sample_rate = 20e6;
  std::vector<StageParams> stages;  // one entry per bit, stage 1 first
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;

  static AdcConfig ideal(int n_bits = 8);

  void validate() const;
  double lsb() const { return refs.lsb(n_bits); }
  std::uint32_t max_code() const { return (1u << n_bits) - 1u; }
};

struct ConversionRecord {
  std::int64_t sample_index = 0;
  std::vector<std::uint8_t> bits;  // MSB first; bits[0] came from stage 1
  std::uint32_t code = 0;
  std::int64_t emit_cycle = 0;

  bool operator==(const ConversionRecord&) const = default;
};

/// Sampling noise injected once per sample at stage-1 acquisition.
/// With sigma == 0 perturb() returns its input without consuming a
/// variate, so noiseless runs are independent of generator state.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, double sigma);

  double perturb(double v);
  double sigma() const { return sigma_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
  double sigma_;
};

/// Comparator decision: 1 iff vin >= vth + offset (ties resolve high).
std::uint8_t compare(double vin, const References& refs, double offset);

/// Residue of one stage given its decided bit. Charge conservation on
/// the flipped capacitor gives (1 + r) * vin - r * vref with r = C1/C2
/// and vref picked by the bit; finite amplifier gain A scales that by
/// 1 / (1 + (1 + r) / A); supply rails clamp the result.
double residue(double vin, std::uint8_t bit, const StageParams& params,
               const References& refs);

/// MSB-first bit vector to integer code.
std::uint32_t assemble_code(std::span<const std::uint8_t> bits);

ConversionRecord convert_sample(double vin, const AdcConfig& config,
                                NoiseSource& noise,
                                std::int64_t sample_index = 0);
ConversionRecord convert_sample(double vin, const AdcConfig& config);

/// Per-stage voltages seen during one conversion, for invariant checks.
/// stage_inputs[0] is the sampled input; stage_inputs[i] is the residue
/// handed to stage i + 1.
struct ConversionTrace {
  ConversionRecord record;
  std::vector<double> stage_inputs;
};

ConversionTrace convert_sample_traced(double vin, const AdcConfig& config,
                                      NoiseSource& noise,
                                      std::int64_t sample_index = 0);

/// Converts a whole record with one noise generator seeded from the
/// config; bit-for-bit identical to streaming the same samples through
/// a Pipeline.
std::vector<ConversionRecord> convert_waveform(std::span<const double> samples,
                                               const AdcConfig& config);

enum class ClockPhase { Phi1Sampling, Phi2Multiplying };

/// Work latched in one stage between clocks: the voltage the stage will
/// quantize next phi1 and the bits earlier stages already resolved for
/// that sample.
struct StageSlot {
  std::int64_t sample_index = 0;
  double held_v = 0.0;
  std::vector<std::uint8_t> bits;
};

struct PipelineState {
  std::int64_t cycle = 0;
  ClockPhase phase = ClockPhase::Phi1Sampling;
  std::vector<std::optional<StageSlot>> slots;  // index 0 = stage 1
  std::int64_t next_sample_index = 0;

  static PipelineState initial(const AdcConfig& config);
  bool empty() const;
};

/// Advances one full clock: phi1 samples/decides in every occupied
/// stage, phi2 multiplies and hands each residue to the next stage.
/// Sample s enters on the call after cycle s and its record emerges
/// N calls later, i.e. emit_cycle == sample_index + n_bits.
std::optional<ConversionRecord> pipeline_step(PipelineState& state,
                                              std::optional<double> new_sample,
                                              const AdcConfig& config,
                                              NoiseSource& noise);

/// Streaming front end owning the state and the per-run noise source.
class Pipeline {
 public:
  explicit Pipeline(AdcConfig config);

  std::optional<ConversionRecord> step(std::optional<double> new_sample);
  std::vector<ConversionRecord> drain();

  const PipelineState& state() const { return state_; }
  const AdcConfig& config() const { return config_; }

 private:
  AdcConfig config_;
  PipelineState state_;
  NoiseSource noise_;
};

}  // namespace adcsim
