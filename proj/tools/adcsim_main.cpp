#include <string>
#include <vector>

#include "CLI11.hpp"

#include "adcsim/runner.hpp"
#include "adcsim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Behavioral simulator for a 1-bit-per-stage pipeline ADC"};
  app.require_subcommand(1);
  app.set_version_flag("--version", adcsim::kVersion);

  std::string config_path;
  std::string out_dir;
  std::string input_path;
  bool force = false;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_flag("--force", force, "overwrite existing output files");
    cmd->add_option("--set", overrides,
                    "config override as key=value, repeatable "
                    "(e.g. --set stage_defaults.dc_gain_db=55)");
  };

  CLI::App* convert = app.add_subcommand(
      "convert", "stream a CSV of voltages through the pipeline");
  add_common(convert);
  convert
      ->add_option("--input", input_path,
                   "input CSV with a single vin_v column")
      ->required();

  CLI::App* linearity = app.add_subcommand(
      "linearity", "sweep the transfer curve and report DNL/INL");
  add_common(linearity);

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "capture a coherent sine and report SNDR/ENOB/SFDR");
  add_common(spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : adcsim::cli::kExitConfig;
  }

  adcsim::cli::RunManifest manifest;
  if (convert->parsed()) {
    manifest.command = adcsim::cli::Command::Convert;
  } else if (linearity->parsed()) {
    manifest.command = adcsim::cli::Command::Linearity;
  } else {
    manifest.command = adcsim::cli::Command::Spectrum;
  }
  manifest.config_path = config_path;
  manifest.output_dir = out_dir;
  manifest.input_path = input_path;
  manifest.force = force;
  manifest.overrides = overrides;

  return adcsim::cli::run_manifest(manifest);
}
