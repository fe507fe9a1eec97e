#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "adcsim/adc.hpp"
#include "adcsim/errors.hpp"

namespace adcsim {

struct FftSettings {
  std::size_t n_fft = 1024;
  std::size_t cycles = 101;
  std::optional<double> amplitude;  // absent -> default_sine_amplitude
};

struct ToolConfig {
  AdcConfig adc;
  FftSettings fft;
  nlohmann::json resolved;  // canonical form, embeds into summary.json
};

/// Expands a raw config document to canonical form: every default made
/// explicit and the stages array fully materialized. A document that has
/// a "config" object (a previous run's summary.json) resolves to that
/// object, so summaries reload as configs. Unknown keys are errors.
nlohmann::json resolve_config_json(nlohmann::json raw);

/// key=value assignments applied to a canonical document. Keys are
/// dotted paths with optional array index, e.g.
/// stage_defaults.dc_gain_db=55 or stages[0].comparator_offset_v=0.01;
/// values parse as JSON first (numbers, null) and fall back to strings.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Full pipeline: resolve, apply overrides in order, validate.
ToolConfig parse_config(const nlohmann::json& raw,
                        const std::vector<std::string>& overrides = {});

ToolConfig load_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

}  // namespace adcsim
