#pragma once

// Data-parallel sweeps: Bell-region scans, eavesdropper strategy batches and
// strategy scans with Monte Carlo confirmation. Every kernel takes an
// Execution flag; Serial is the reference loop and Parallel spreads the same
// independent work items over OpenMP threads. Both produce identical output.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srq/bell.hpp"
#include "srq/protocol.hpp"

namespace srq {

// alpha_k = k / (steps - 1), k = 0 .. steps-1.
std::vector<double> alpha_grid(std::size_t steps);

struct BellSweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  double s_closed_form = 0.0;
  double s_oracle = 0.0;
  Verdict verdict = Verdict::Satisfied;
};

// beta = +sqrt(1 - alpha^2) for each alpha in [0, 1].
std::vector<BellSweepRow> bell_sweep(std::span<const double> alphas,
                                     ProjectorConvention convention,
                                     Execution execution = Execution::Parallel);

// Random intercept-resend strategies: targets uniform over {A, B, both}, one
// to three atoms with random weights and Haar-random complex directions.
std::vector<EveStrategy> random_strategies(std::size_t count, std::uint64_t seed);

std::vector<double> s_with_eve_batch(std::span<const EveStrategy> strategies, double alpha,
                                     double beta, ProjectorConvention convention,
                                     Execution execution = Execution::Parallel);

struct NamedStrategy {
  std::string label;
  EveStrategy strategy;
};

// Identity channel, always-intercept |1>_A, then Eve measuring arm A along
// cos(theta)|0> + sin(theta)|1> for `points` angles in [0, pi).
std::vector<NamedStrategy> default_eve_family(std::size_t points);

struct EveScanRow {
  NamedStrategy entry;
  double s_analytic = 0.0;
  std::optional<double> s_simulated;
  std::optional<double> s_stderr;
  std::optional<ProtocolVerdict> verdict;
};

// Row i (if simulated) runs `base` with eve = family[i] and run_index = i.
std::vector<EveScanRow> eve_scan(std::span<const NamedStrategy> family,
                                 const ProtocolConfig& base, bool simulate,
                                 Execution execution = Execution::Parallel);

}  // namespace srq
