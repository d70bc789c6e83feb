#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "eprlab/report.hpp"
#include "eprlab/version.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-particle entangled-state measurement laboratory"};
  app.set_version_flag("--version", eprlab::kVersion);

  std::string subcommand;
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;

  app.add_option("subcommand", subcommand, "Experiment to run")
      ->required()
      ->check(CLI::IsMember({"state", "evolve", "discriminate", "signal-test",
                             "kim-shih", "persistence", "bell", "oracle-check"}));
  app.add_option("--config", config_path, "Path to a JSON configuration document");
  app.add_option("--seed", seed, "Override the configured RNG seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--out", out_dir, "Output directory (default: out)");
  app.add_option("--workers", workers, "Worker threads for block/delay parallelism")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    eprlab::RunConfig cfg =
        eprlab::parse_config(config_path.empty() ? "{}" : read_file(config_path));
    if (seed_given) cfg.seed = seed;
    return eprlab::dispatch(cfg, subcommand, out_dir, workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
