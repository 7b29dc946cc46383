#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adm/commands.hpp"
#include "adm/config.hpp"

#ifndef ADM_PRESET_DIR
#define ADM_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

// A --config value that is not an existing file is looked up as a preset name.
fs::path resolve_config(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  const fs::path preset = fs::path(ADM_PRESET_DIR) / (arg + ".cfg");
  if (fs::exists(preset)) return preset;
  throw adm::ConfigError("no config file or preset named '" + arg + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive demodulation link simulator for 16-DPSK / 16-DAPSK"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_arg, out;
  std::vector<std::string> sets;
  std::string seed, trials, workers;
  app.add_option("--config", config_arg, "config file or preset name");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--trials", trials, "Monte Carlo symbol pairs per point");
  app.add_option("--out", out, "output file");
  app.add_option("--workers", workers, "OpenMP threads (0 = default)");
  app.add_option("--set", sets, "override any config key (key=value)");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"ber", "BER curves (analytic and/or Monte Carlo)"},
      {"thresholds", "DAPSK band thresholds per ring ratio"},
      {"regions", "ADM operating regions at the target BER"},
      {"spec-eff", "spectral efficiency over Rayleigh fading"},
      {"e2e", "end-to-end rateless run with transcript"},
      {"mapping-dump", "bit-to-angle mapping table"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  adm::Config cfg;
  try {
    if (!config_arg.empty()) cfg.merge(adm::Config::load(resolve_config(config_arg)));
    if (!seed.empty()) cfg.set("seed", seed);
    if (!trials.empty()) cfg.set("trials", trials);
    if (!workers.empty()) cfg.set("workers", workers);
    if (!out.empty()) cfg.set("out", out);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw adm::ConfigError("--set expects key=value");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const adm::CommandResult r = adm::run_command(command, cfg);
    std::string path = cfg.get("out");
    if (path.empty()) {
      path = adm::default_output_name(command);
      if (command == "e2e" && cfg.get("transcript_format") == "jsonl") path = "transcript.jsonl";
    }
    adm::write_file_atomic(path, r.csv);
    if (!r.summary.empty()) std::cout << r.summary;
    std::cout << "wrote " << path << '\n';
  } catch (const adm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
