#include "adcsim/config.hpp"

#include <cctype>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>

namespace adcsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError(message);
}

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    fail(std::string(key) + " must be a number");
  }
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const char* key,
                         std::int64_t fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    fail(std::string(key) + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::uint64_t get_unsigned(const json& obj, const char* key,
                           std::uint64_t fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) {
    return v.get<std::uint64_t>();
  }
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(std::string(key) + " must be a non-negative integer");
}

// number | null | absent; null and absent both mean "not set".
json get_nullable_number(const json& obj, const char* key,
                         const json& fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (v.is_null()) {
    return nullptr;
  }
  if (!v.is_number()) {
    fail(std::string(key) + " must be a number or null");
  }
  return v;
}

constexpr std::initializer_list<const char*> kStageKeys = {
    "cap_ratio", "dc_gain_db", "comparator_offset_v", "rail_low_v",
    "rail_high_v"};

json resolve_stage(const json& entry, const json& defaults,
                   const char* where) {
  if (!entry.is_object()) {
    fail(std::string(where) + " must be an object");
  }
  check_keys(entry, where, kStageKeys);
  json out;
  out["cap_ratio"] = get_number(entry, "cap_ratio", defaults.at("cap_ratio"));
  out["dc_gain_db"] =
      get_nullable_number(entry, "dc_gain_db", defaults.at("dc_gain_db"));
  out["comparator_offset_v"] = get_number(entry, "comparator_offset_v",
                                          defaults.at("comparator_offset_v"));
  out["rail_low_v"] =
      get_number(entry, "rail_low_v", defaults.at("rail_low_v"));
  out["rail_high_v"] =
      get_number(entry, "rail_high_v", defaults.at("rail_high_v"));
  return out;
}

struct PathSegment {
  std::string name;
  std::optional<std::size_t> index;
};

std::vector<PathSegment> parse_override_path(const std::string& path) {
  std::vector<PathSegment> segments;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t dot = path.find('.', pos);
    std::string token =
        path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    PathSegment segment;
    const std::size_t open = token.find('[');
    if (open != std::string::npos) {
      if (token.back() != ']' || open + 2 > token.size() - 1) {
        fail("bad override path: " + path);
      }
      const std::string digits =
          token.substr(open + 1, token.size() - open - 2);
      std::size_t index = 0;
      for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          fail("bad override index in: " + path);
        }
        index = index * 10 + static_cast<std::size_t>(c - '0');
      }
      if (digits.empty()) {
        fail("bad override index in: " + path);
      }
      segment.index = index;
      segment.name = token.substr(0, open);
    } else {
      segment.name = token;
    }
    if (segment.name.empty()) {
      fail("bad override path: " + path);
    }
    segments.push_back(std::move(segment));
    if (dot == std::string::npos) {
      break;
    }
    pos = dot + 1;
  }
  return segments;
}

std::string trim(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t");
  std::size_t last = text.find_last_not_of(" \t");
  if (first == std::string::npos) {
    return {};
  }
  return text.substr(first, last - first + 1);
}

// Summaries carry the run's config under "config"; accept them as
// configs directly so a run can be repeated from its own output.
json unwrap(json raw) {
  if (!raw.is_object()) {
    fail("config root must be an object");
  }
  if (raw.contains("config")) {
    json inner = raw.at("config");
    if (!inner.is_object()) {
      fail("config must be an object");
    }
    return inner;
  }
  return raw;
}

}  // namespace

json resolve_config_json(json raw) {
  raw = unwrap(std::move(raw));
  check_keys(raw, "config",
             {"n_bits", "vrefp", "vrefn", "vth", "sample_rate_hz",
              "noise_sigma_v", "rng_seed", "stage_defaults", "stages", "fft"});

  json out;
  const std::int64_t n_bits = get_integer(raw, "n_bits", 8);
  out["n_bits"] = n_bits;
  const double vrefp = get_number(raw, "vrefp", 1.0);
  const double vrefn = get_number(raw, "vrefn", -1.0);
  out["vrefp"] = vrefp;
  out["vrefn"] = vrefn;
  out["vth"] = get_number(raw, "vth", 0.5 * (vrefp + vrefn));
  out["sample_rate_hz"] = get_number(raw, "sample_rate_hz", 20e6);
  out["noise_sigma_v"] = get_number(raw, "noise_sigma_v", 0.0);
  out["rng_seed"] = get_unsigned(raw, "rng_seed", 0);

  json base_defaults = {{"cap_ratio", 1.0},
                        {"dc_gain_db", nullptr},
                        {"comparator_offset_v", 0.0},
                        {"rail_low_v", -5.0},
                        {"rail_high_v", 5.0}};
  json defaults = base_defaults;
  if (raw.contains("stage_defaults")) {
    defaults = resolve_stage(raw.at("stage_defaults"), base_defaults,
                             "stage_defaults");
  }
  out["stage_defaults"] = defaults;

  json stages = json::array();
  if (raw.contains("stages") && !raw.at("stages").is_null()) {
    const json& list = raw.at("stages");
    if (!list.is_array()) {
      fail("stages must be an array or null");
    }
    if (n_bits >= 1 &&
        list.size() != static_cast<std::size_t>(n_bits)) {
      fail("stages must have exactly n_bits entries");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "stages[" + std::to_string(i) + "]";
      stages.push_back(resolve_stage(list[i], defaults, where.c_str()));
    }
  } else if (n_bits >= 1) {
    for (std::int64_t i = 0; i < n_bits; ++i) {
      stages.push_back(defaults);
    }
  }
  out["stages"] = stages;

  json fft_out;
  if (raw.contains("fft")) {
    const json& fft_in = raw.at("fft");
    if (!fft_in.is_object()) {
      fail("fft must be an object");
    }
    check_keys(fft_in, "fft", {"n_fft", "cycles", "amplitude_v"});
    fft_out["n_fft"] = get_integer(fft_in, "n_fft", 1024);
    fft_out["cycles"] = get_integer(fft_in, "cycles", 101);
    fft_out["amplitude_v"] =
        get_nullable_number(fft_in, "amplitude_v", nullptr);
  } else {
    fft_out = {{"n_fft", 1024}, {"cycles", 101}, {"amplitude_v", nullptr}};
  }
  out["fft"] = fft_out;

  return out;
}

void apply_override(json& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail("override must look like key=value: " + assignment);
  }
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value_text = assignment.substr(eq + 1);
  if (path.empty()) {
    fail("override must look like key=value: " + assignment);
  }

  json value = json::parse(value_text, nullptr, false);
  if (value.is_discarded()) {
    value = value_text;  // not valid JSON: treat as a plain string
  }

  const std::vector<PathSegment> segments = parse_override_path(path);
  json* node = &doc;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const PathSegment& segment = segments[s];
    const bool last = s + 1 == segments.size();
    if (!node->is_object()) {
      fail("override path crosses a non-object value: " + path);
    }
    json& child = (*node)[segment.name];
    json* target = &child;
    if (segment.index) {
      if (!child.is_array()) {
        fail("'" + segment.name + "' is not an array in override: " + path);
      }
      if (*segment.index >= child.size()) {
        fail("index out of range in override: " + path);
      }
      target = &child[*segment.index];
    }
    if (last) {
      *target = std::move(value);
    } else {
      if (target->is_null()) {
        *target = json::object();
      }
      node = target;
    }
  }
}

ToolConfig parse_config(const json& raw,
                        const std::vector<std::string>& overrides) {
  json doc = unwrap(raw);

  for (const std::string& assignment : overrides) {
    // stages[i] overrides need the array to exist; materialize it from
    // the current bit count so spot overrides work on minimal configs.
    const std::string path = trim(assignment.substr(0, assignment.find('=')));
    if (path.rfind("stages[", 0) == 0 &&
        (!doc.contains("stages") || doc.at("stages").is_null())) {
      std::int64_t n_bits = 8;
      if (doc.contains("n_bits") && doc.at("n_bits").is_number_integer()) {
        n_bits = doc.at("n_bits").get<std::int64_t>();
      }
      doc["stages"] = json::array();
      for (std::int64_t i = 0; i < n_bits; ++i) {
        doc["stages"].push_back(json::object());
      }
    }
    apply_override(doc, assignment);
  }

  json canonical = resolve_config_json(doc);

  ToolConfig config;
  config.resolved = canonical;
  config.adc.n_bits = static_cast<int>(canonical.at("n_bits").get<std::int64_t>());
  config.adc.refs =
      References(canonical.at("vrefp").get<double>(),
                 canonical.at("vrefn").get<double>(),
                 canonical.at("vth").get<double>());
  config.adc.sample_rate = canonical.at("sample_rate_hz").get<double>();
  config.adc.noise_sigma = canonical.at("noise_sigma_v").get<double>();
  config.adc.rng_seed = canonical.at("rng_seed").get<std::uint64_t>();
  for (const json& entry : canonical.at("stages")) {
    StageParams stage;
    stage.cap_ratio = entry.at("cap_ratio").get<double>();
    if (!entry.at("dc_gain_db").is_null()) {
      stage.dc_gain = db_to_linear_gain(entry.at("dc_gain_db").get<double>());
    }
    stage.comparator_offset = entry.at("comparator_offset_v").get<double>();
    stage.rail_low = entry.at("rail_low_v").get<double>();
    stage.rail_high = entry.at("rail_high_v").get<double>();
    config.adc.stages.push_back(stage);
  }

  const json& fft_obj = canonical.at("fft");
  const std::int64_t n_fft = fft_obj.at("n_fft").get<std::int64_t>();
  const std::int64_t cycles = fft_obj.at("cycles").get<std::int64_t>();
  if (n_fft < 8 || (n_fft & (n_fft - 1)) != 0) {
    fail("fft.n_fft must be a power of two, at least 8");
  }
  if (cycles < 1) {
    fail("fft.cycles must be a positive integer");
  }
  if (cycles >= n_fft / 2) {
    fail("fft.cycles must be below fft.n_fft / 2");
  }
  config.fft.n_fft = static_cast<std::size_t>(n_fft);
  config.fft.cycles = static_cast<std::size_t>(cycles);
  if (!fft_obj.at("amplitude_v").is_null()) {
    config.fft.amplitude = fft_obj.at("amplitude_v").get<double>();
  }

  try {
    config.adc.validate();
  } catch (const InvalidInputError& e) {
    fail(e.what());
  }
  return config;
}

ToolConfig load_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    fail("cannot open config file: " + path.string());
  }
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(raw, overrides);
}

}  // namespace adcsim
