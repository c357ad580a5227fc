#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sdde/catalog.hpp"
#include "sdde/config.hpp"
#include "sdde/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sddekit: stochastic delay equation experiments"};
  app.set_version_flag("--version", sdde::toolkit_version());
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> workers;
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--workers", workers, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-models", "List built-in models");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& entry : sdde::list_models()) {
        std::printf("%-14s alpha=%g beta=%g  %s\n", entry.id.c_str(), entry.alpha, entry.beta,
                    entry.description.c_str());
      }
      return 0;
    }
    const auto config = sdde::load_config(config_path);
    const auto written = sdde::run_and_write(config, {seed, out_dir, workers});
    for (const auto& path : written) std::cout << path << '\n';
    return 0;
  } catch (const sdde::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}
