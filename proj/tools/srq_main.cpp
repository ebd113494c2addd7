// srq: command-line front end for the single-rail QKD simulator.
//
//   srq bell-sweep    --out DIR [--steps N] [--projector-convention operational|literal]
//   srq run-protocol  --out DIR [--config PATH] [--seed N] [--rounds N]
//                     [--backend ideal|device|cavity] [--eta X]
//   srq eve-scan      --out DIR [--family default|random] [--points N] [--no-simulate]
//   srq device-stats  --out DIR [--steps N] [--samples N]
//   srq cavity-demo   --out DIR
//
// SRQ_LOG=trace|debug|info|warn|error|off sets log verbosity (default warn).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "srq/config.hpp"
#include "srq/report.hpp"

namespace {

struct Flags {
  std::string out = "out";
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> rounds;
  std::optional<std::string> backend;
  std::optional<std::string> convention;
  std::optional<double> eta;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> points;
  std::optional<std::string> family;
  std::optional<std::uint64_t> samples;
  bool no_simulate = false;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("srq");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SRQ_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--config", f.config, "Config or manifest JSON");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--rounds", f.rounds, "Protocol rounds");
  cmd->add_option("--backend", f.backend, "ideal|device|cavity");
  cmd->add_option("--projector-convention", f.convention, "operational|literal");
  cmd->add_option("--eta", f.eta, "Detector efficiency in (0, 1]");
}

// Loads config (and manifest parameters), then applies flag overrides.
std::pair<srq::ProtocolConfig, srq::CommandParams> resolve(const Flags& f) {
  srq::ProtocolConfig config;
  srq::CommandParams params;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw srq::ConfigError({*f.config + ": cannot open"});
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw srq::ConfigError({*f.config + ": " + e.what()});
    }
    config = srq::load_config_file(*f.config);
    if (j.is_object() && j.contains("parameters")) {
      params = srq::command_params_from_json(j["parameters"], params);
    }
  }
  if (f.seed) config.seed = *f.seed;
  if (f.rounds) config.rounds = *f.rounds;
  if (f.eta) config.eta = *f.eta;
  if (f.backend) config.backend = srq::parse_backend(*f.backend);
  if (f.convention) config.convention = srq::parse_convention(*f.convention);
  if (f.steps) params.steps = *f.steps;
  if (f.points) params.points = *f.points;
  if (f.samples) params.samples = *f.samples;
  if (f.family) {
    if (*f.family != "default" && *f.family != "random") {
      throw std::invalid_argument("--family must be default or random");
    }
    params.family = *f.family;
  }
  if (f.no_simulate) params.simulate = false;
  srq::validate(config);
  return {config, params};
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Single-rail entanglement QKD simulator"};
  app.require_subcommand(1);
  Flags flags;

  auto* bell = app.add_subcommand("bell-sweep", "Scan S over alpha and classify against 0 <= S <= 1");
  add_common(bell, flags);
  bell->add_option("--steps", flags.steps, "Number of alpha grid points");

  auto* run = app.add_subcommand("run-protocol", "Run the key distribution protocol");
  add_common(run, flags);

  auto* eve = app.add_subcommand("eve-scan", "Evaluate intercept-resend strategies");
  add_common(eve, flags);
  eve->add_option("--family", flags.family, "default|random");
  eve->add_option("--points", flags.points, "Family size");
  eve->add_flag("--no-simulate", flags.no_simulate, "Skip the Monte Carlo column");

  auto* dev = app.add_subcommand("device-stats", "Measurement device POVM and success rates");
  add_common(dev, flags);
  dev->add_option("--steps", flags.steps, "Number of alpha grid points");
  dev->add_option("--samples", flags.samples, "Monte Carlo draws per row");

  auto* cav = app.add_subcommand("cavity-demo", "Jaynes-Cummings transfer report");
  add_common(cav, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto [config, params] = resolve(flags);
    if (*bell) return srq::cmd_bell_sweep(flags.out, config, params);
    if (*run) return srq::cmd_run_protocol(flags.out, config);
    if (*eve) return srq::cmd_eve_scan(flags.out, config, params);
    if (*dev) return srq::cmd_device_stats(flags.out, config, params);
    if (*cav) return srq::cmd_cavity_demo(flags.out, config);
  } catch (const srq::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return srq::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return srq::kExitError;
  }
  return srq::kExitError;
}
