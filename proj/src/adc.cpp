#include "adcsim/adc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adcsim {

namespace {

bool finite(double v) { return std::isfinite(v); }

void require_finite(double v, const char* name) {
  if (!finite(v)) {
    throw InvalidInputError(std::string(name) + " must be finite");
  }
}

}  // namespace

void References::validate() const {
  require_finite(vrefp, "vrefp");
  require_finite(vrefn, "vrefn");
  require_finite(vth, "vth");
  if (!(vrefn < vrefp)) {
    throw InvalidInputError("vrefn must be below vrefp");
  }
}

double References::lsb(int n_bits) const {
  if (n_bits < 1 || n_bits > 24) {
    throw InvalidInputError("n_bits must be in [1, 24]");
  }
  return full_scale() / static_cast<double>(1u << n_bits);
}

void StageParams::validate() const {
  require_finite(cap_ratio, "cap_ratio");
  if (!(cap_ratio > 0.0)) {
    throw InvalidInputError("cap_ratio must be positive");
  }
  if (dc_gain) {
    require_finite(*dc_gain, "dc_gain");
    if (!(*dc_gain > 0.0)) {
      throw InvalidInputError("dc_gain must be positive");
    }
  }
  require_finite(comparator_offset, "comparator_offset");
  require_finite(rail_low, "rail_low");
  require_finite(rail_high, "rail_high");
  if (!(rail_low < rail_high)) {
    throw InvalidInputError("rail_low must be below rail_high");
  }
}

double db_to_linear_gain(double db) {
  require_finite(db, "gain_db");
  return std::pow(10.0, db / 20.0);
}

AdcConfig AdcConfig::ideal(int n_bits) {
  AdcConfig config;
  config.n_bits = n_bits;
  config.stages.assign(static_cast<std::size_t>(std::max(n_bits, 0)),
                       StageParams{});
  return config;
}

void AdcConfig::validate() const {
  if (n_bits < 1 || n_bits > 24) {
    throw InvalidInputError("n_bits must be in [1, 24]");
  }
  refs.validate();
  require_finite(sample_rate, "sample_rate_hz");
  if (!(sample_rate > 0.0)) {
    throw InvalidInputError("sample_rate_hz must be positive");
  }
  if (stages.size() != static_cast<std::size_t>(n_bits)) {
    throw InvalidInputError("stages must have exactly n_bits entries");
  }
  for (const StageParams& stage : stages) {
    stage.validate();
  }
  require_finite(noise_sigma, "noise_sigma_v");
  if (noise_sigma < 0.0) {
    throw InvalidInputError("noise_sigma_v must be non-negative");
  }
}

NoiseSource::NoiseSource(std::uint64_t seed, double sigma)
    : rng_(seed), dist_(0.0, sigma > 0.0 ? sigma : 1.0), sigma_(sigma) {
  require_finite(sigma, "noise_sigma_v");
  if (sigma < 0.0) {
    throw InvalidInputError("noise_sigma_v must be non-negative");
  }
}

double NoiseSource::perturb(double v) {
  if (sigma_ == 0.0) {
    return v;  // no draw: generator state untouched
  }
  return v + dist_(rng_);
}

std::uint8_t compare(double vin, const References& refs, double offset) {
  require_finite(vin, "vin");
  require_finite(offset, "comparator_offset");
  return vin >= refs.vth + offset ? 1 : 0;
}

double residue(double vin, std::uint8_t bit, const StageParams& params,
               const References& refs) {
  require_finite(vin, "vin");
  const double r = params.cap_ratio;
  const double vref = bit ? refs.vrefp : refs.vrefn;
  double out = (1.0 + r) * vin - r * vref;
  if (params.dc_gain) {
    out /= 1.0 + (1.0 + r) / *params.dc_gain;
  }
  return std::clamp(out, params.rail_low, params.rail_high);
}

std::uint32_t assemble_code(std::span<const std::uint8_t> bits) {
  if (bits.empty() || bits.size() > 24) {
    throw InvalidInputError("bit vector must have 1 to 24 entries");
  }
  std::uint32_t code = 0;
  for (std::uint8_t bit : bits) {
    if (bit > 1) {
      throw InvalidInputError("bits must be 0 or 1");
    }
    code = (code << 1) | bit;
  }
  return code;
}

ConversionTrace convert_sample_traced(double vin, const AdcConfig& config,
                                      NoiseSource& noise,
                                      std::int64_t sample_index) {
  require_finite(vin, "vin");
  const std::size_t n = static_cast<std::size_t>(config.n_bits);

  ConversionTrace trace;
  trace.stage_inputs.reserve(n);
  trace.record.sample_index = sample_index;
  trace.record.emit_cycle = sample_index + config.n_bits;
  trace.record.bits.reserve(n);

  double v = noise.perturb(vin);
  for (std::size_t i = 0; i < n; ++i) {
    trace.stage_inputs.push_back(v);
    const StageParams& stage = config.stages[i];
    const std::uint8_t bit = compare(v, config.refs, stage.comparator_offset);
    trace.record.bits.push_back(bit);
    if (i + 1 < n) {
      v = residue(v, bit, stage, config.refs);
    }
  }
  trace.record.code = assemble_code(trace.record.bits);
  return trace;
}

ConversionRecord convert_sample(double vin, const AdcConfig& config,
                                NoiseSource& noise,
                                std::int64_t sample_index) {
  return convert_sample_traced(vin, config, noise, sample_index).record;
}

ConversionRecord convert_sample(double vin, const AdcConfig& config) {
  NoiseSource noise(config.rng_seed, config.noise_sigma);
  return convert_sample(vin, config, noise);
}

std::vector<ConversionRecord> convert_waveform(std::span<const double> samples,
                                               const AdcConfig& config) {
  config.validate();
  NoiseSource noise(config.rng_seed, config.noise_sigma);
  std::vector<ConversionRecord> records;
  records.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    records.push_back(convert_sample(samples[i], config, noise,
                                     static_cast<std::int64_t>(i)));
  }
  return records;
}

PipelineState PipelineState::initial(const AdcConfig& config) {
  config.validate();
  PipelineState state;
  state.slots.resize(static_cast<std::size_t>(config.n_bits));
  return state;
}

bool PipelineState::empty() const {
  return std::none_of(slots.begin(), slots.end(),
                      [](const auto& slot) { return slot.has_value(); });
}

std::optional<ConversionRecord> pipeline_step(PipelineState& state,
                                              std::optional<double> new_sample,
                                              const AdcConfig& config,
                                              NoiseSource& noise) {
  const std::size_t n = static_cast<std::size_t>(config.n_bits);
  if (state.slots.size() != n) {
    throw InvalidStateError("pipeline state depth does not match config");
  }
  if (new_sample) {
    require_finite(*new_sample, "sample");
  }

  std::optional<ConversionRecord> emitted;

  // phi1: stage 1 acquires the new sample while every occupied stage
  // re-quantizes what it latched, so the fresh sample gets its first
  // decision on the cycle it enters.
  if (new_sample) {
    StageSlot fresh;
    fresh.sample_index = state.next_sample_index++;
    fresh.held_v = noise.perturb(*new_sample);
    fresh.bits.reserve(n);
    state.slots[0] = std::move(fresh);
  }

  // Deepest stage first, so every slot is already clear when its
  // upstream neighbor hands a residue over during phi2.
  for (std::size_t i = n; i-- > 0;) {
    if (!state.slots[i]) {
      continue;
    }
    StageSlot slot = std::move(*state.slots[i]);
    state.slots[i].reset();

    const StageParams& stage = config.stages[i];
    const std::uint8_t bit =
        compare(slot.held_v, config.refs, stage.comparator_offset);
    slot.bits.push_back(bit);

    if (i + 1 == n) {
      ConversionRecord record;
      record.sample_index = slot.sample_index;
      record.code = assemble_code(slot.bits);
      record.bits = std::move(slot.bits);
      record.emit_cycle = state.cycle + 1;
      emitted = std::move(record);
    } else {
      slot.held_v = residue(slot.held_v, bit, stage, config.refs);
      state.slots[i + 1] = std::move(slot);
    }
  }

  ++state.cycle;
  state.phase = ClockPhase::Phi1Sampling;  // both phases ran; at rest again
  return emitted;
}

Pipeline::Pipeline(AdcConfig config)
    : config_(std::move(config)),
      state_(PipelineState::initial(config_)),
      noise_(config_.rng_seed, config_.noise_sigma) {}

std::optional<ConversionRecord> Pipeline::step(std::optional<double> new_sample) {
  return pipeline_step(state_, new_sample, config_, noise_);
}

std::vector<ConversionRecord> Pipeline::drain() {
  std::vector<ConversionRecord> records;
  while (!state_.empty()) {
    if (auto record = step(std::nullopt)) {
      records.push_back(std::move(*record));
    }
  }
  return records;
}

}  // namespace adcsim
