#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adcsim/config.hpp"

namespace adcsim::cli {

enum class Command { Convert, Linearity, Spectrum };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct RunManifest {
  Command command = Command::Convert;
  std::filesystem::path config_path;
  std::filesystem::path output_dir;
  std::vector<std::string> overrides;
  std::filesystem::path input_path;  // convert only
  bool force = false;
};

void run_convert(const RunManifest& manifest);
void run_linearity(const RunManifest& manifest);
void run_spectrum(const RunManifest& manifest);

/// Dispatches on manifest.command, maps exceptions to exit codes
/// (config and coherence problems -> kExitConfig, anything the run
/// itself hits -> kExitRuntime) and reports them on stderr.
int run_manifest(const RunManifest& manifest);

/// Shortest round-trip decimal form of v, used for every number the
/// tool writes so reruns are byte-identical.
std::string format_double(double v);

}  // namespace adcsim::cli
