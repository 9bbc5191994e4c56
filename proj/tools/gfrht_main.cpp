// gfrht sweep|edges|anomaly-density|anomaly-types --config <path> [--seed N] [--out DIR]
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gfrht/harness/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph fractional Hilbert transform experiments"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  for (const char* name : {"sweep", "edges", "anomaly-density", "anomaly-types"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::optional<std::filesystem::path> out_dir;
    if (out) out_dir = *out;
    const auto cfg = gfrht::harness::load_config(config, seed, out_dir);
    if (command != gfrht::harness::to_string(cfg.kind)) {
      throw gfrht::Error(gfrht::ErrorKind::Config,
                         "config kind '" + std::string(gfrht::harness::to_string(cfg.kind)) + "' does not match command '" +
                             command + "'");
    }
    const auto report = gfrht::harness::run(cfg);
    gfrht::harness::write_report(report, cfg.output_dir);
    std::cout << report.summary.dump(2) << '\n';
    return 0;
  } catch (const gfrht::Error& e) {
    std::cerr << "gfrht: " << e.what() << '\n';
    return gfrht::is_numerical(e.kind()) ? kNumericalError : kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "gfrht: " << e.what() << '\n';
    return kConfigError;
  }
}
