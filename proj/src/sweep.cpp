#include "srq/sweep.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

#include "srq/rng.hpp"

namespace srq {

namespace {

template <class Body>
void for_each_index(std::size_t n, Execution execution, Body&& body) {
  const auto count = static_cast<std::int64_t>(n);
  if (execution == Execution::Serial) {
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(srq_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SuperpositionCoeffs random_direction(SeededRng& rng) {
  // Uniform on the Bloch sphere.
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double theta = std::acos(z);
  return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

}  // namespace

std::vector<double> alpha_grid(std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("alpha grid needs at least one point");
  if (steps == 1) return {0.5};
  std::vector<double> out(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    out[k] = static_cast<double>(k) / static_cast<double>(steps - 1);
  }
  return out;
}

std::vector<BellSweepRow> bell_sweep(std::span<const double> alphas,
                                     ProjectorConvention convention, Execution execution) {
  if (alphas.empty()) throw std::invalid_argument("bell sweep grid is empty");
  std::vector<BellSweepRow> rows(alphas.size());
  for_each_index(alphas.size(), execution, [&](std::size_t i) {
    const double a = alphas[i];
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    BellSweepRow row;
    row.alpha = a;
    row.beta = std::sqrt(1.0 - a * a);
    const SValue s = s_value(row.alpha, row.beta, convention);
    row.s_closed_form = s.closed_form;
    row.s_oracle = s.oracle;
    row.verdict = check_inequality(s.oracle);
    rows[i] = row;
  });
  return rows;
}

std::vector<EveStrategy> random_strategies(std::size_t count, std::uint64_t seed) {
  std::vector<EveStrategy> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    SeededRng rng(seed, 0, i, 4);
    EveStrategy s;
    const double t = rng.uniform();
    s.targets = t < 1.0 / 3 ? EveTargets::ArmA : (t < 2.0 / 3 ? EveTargets::ArmB : EveTargets::Both);
    const int atoms = 1 + static_cast<int>(rng.uniform() * 3.0);
    double total = 0.0;
    for (int k = 0; k < atoms; ++k) {
      EveAtom atom;
      atom.weight = 0.05 + rng.uniform();
      atom.eA = random_direction(rng);
      atom.eB = random_direction(rng);
      total += atom.weight;
      s.atoms.push_back(atom);
    }
    for (auto& atom : s.atoms) atom.weight /= total;
    out[i] = std::move(s);
  }
  return out;
}

std::vector<double> s_with_eve_batch(std::span<const EveStrategy> strategies, double alpha,
                                     double beta, ProjectorConvention convention,
                                     Execution execution) {
  std::vector<double> out(strategies.size());
  for_each_index(strategies.size(), execution, [&](std::size_t i) {
    out[i] = s_with_eve(strategies[i], alpha, beta, convention);
  });
  return out;
}

std::vector<NamedStrategy> default_eve_family(std::size_t points) {
  std::vector<NamedStrategy> family;
  family.push_back({"identity", no_eve()});
  family.push_back({"intercept_A_one", always_intercept(EveTargets::ArmA, {0.0, 1.0})});
  for (std::size_t k = 0; k < points; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
    family.push_back({"arm_A_theta_" + std::to_string(k),
                      always_intercept(EveTargets::ArmA, {std::cos(theta), std::sin(theta)})});
  }
  return family;
}

std::vector<EveScanRow> eve_scan(std::span<const NamedStrategy> family,
                                 const ProtocolConfig& base, bool simulate,
                                 Execution execution) {
  std::vector<EveScanRow> rows(family.size());
  for_each_index(family.size(), execution, [&](std::size_t i) {
    EveScanRow row;
    row.entry = family[i];
    row.s_analytic = s_with_eve(family[i].strategy, base.alpha, base.beta, base.convention);
    if (simulate) {
      ProtocolConfig cfg = base;
      cfg.eve = family[i].strategy;
      cfg.run_index = i;
      // Rows are the parallel unit here; each run stays on its thread.
      const auto run = run_protocol(cfg, Execution::Serial);
      row.s_simulated = run.result.s_estimate;
      row.s_stderr = run.result.s_stderr;
      row.verdict = run.result.verdict;
    }
    rows[i] = std::move(row);
  });
  return rows;
}

}  // namespace srq
