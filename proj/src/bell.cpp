#include "srq/bell.hpp"

#include <cmath>
#include <string>

#include "srq/optics.hpp"

namespace srq {

namespace {

const Matrix2 kNumberProjector = {{{0.0, 0.0}, {0.0, 1.0}}};

Matrix2 complement(const Matrix2& p) {
  return {{{1.0 - p[0][0], -p[0][1]}, {-p[1][0], 1.0 - p[1][1]}}};
}

}  // namespace

void validate_direction(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) ||
      std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
    throw std::invalid_argument("alpha^2 + beta^2 must equal 1 (got alpha=" +
                                std::to_string(alpha) + ", beta=" + std::to_string(beta) +
                                ")");
  }
}

SuperpositionCoeffs superposition_direction(Party party, double alpha, double beta,
                                            ProjectorConvention convention) {
  validate_direction(alpha, beta);
  SuperpositionCoeffs u;
  if (convention == ProjectorConvention::Operational) {
    u = party == Party::A ? SuperpositionCoeffs{beta, alpha}
                          : SuperpositionCoeffs{beta, -alpha};
  } else {
    u = party == Party::A ? SuperpositionCoeffs{alpha, beta}
                          : SuperpositionCoeffs{alpha, -beta};
  }
  return canonical_phase(u);
}

ProjectorSetting number_setting(Party party) {
  return ProjectorSetting{SettingKind::Number, SuperpositionCoeffs{0.0, 1.0}, party};
}

ProjectorSetting superposition_setting(Party party, double alpha, double beta,
                                       ProjectorConvention convention) {
  return ProjectorSetting{SettingKind::Superposition,
                          superposition_direction(party, alpha, beta, convention), party};
}

Matrix2 projector_matrix(const ProjectorSetting& s) {
  if (s.kind == SettingKind::Number) return kNumberProjector;
  validate(s.direction);
  return projector(s.direction);
}

StateVector apply_settings(const StateVector& psi,
                           const std::optional<ProjectorSetting>& a,
                           const std::optional<ProjectorSetting>& b) {
  StateVector out = psi;
  for (const auto* s : {&a, &b}) {
    if (!s->has_value()) continue;
    const auto& setting = **s;
    // The number projector also annihilates |n>=2>; a superposition projector
    // lives on the {|0>,|1>} span only.
    out = apply_qubit_operator(out, mode_of(setting.party), projector_matrix(setting), 0.0);
  }
  return out;
}

double expectation(const StateVector& psi, const std::optional<ProjectorSetting>& a,
                   const std::optional<ProjectorSetting>& b) {
  if (a && a->party != Party::A) throw std::invalid_argument("first setting must be Alice's");
  if (b && b->party != Party::B) throw std::invalid_argument("second setting must be Bob's");
  // Both projectors are Hermitian and act on different modes, so the product
  // is itself a projector and <psi|Pi|psi> = ||Pi psi||^2.
  return apply_settings(psi, a, b).norm_squared();
}

double expectation_oracle(const std::optional<ProjectorSetting>& a,
                          const std::optional<ProjectorSetting>& b) {
  static const StateVector source = make_source_state();
  return expectation(source, a, b);
}

double combine(const BellTerms& t) {
  return t.pA_prime + t.pB_prime - t.pA_prime_pB_prime - t.pA_prime_pB - t.pA_pB_prime +
         t.pA_pB;
}

BellTerms bell_terms(const StateVector& psi, double alpha, double beta,
                     ProjectorConvention convention) {
  const auto pa = number_setting(Party::A);
  const auto pb = number_setting(Party::B);
  const auto pa_s = superposition_setting(Party::A, alpha, beta, convention);
  const auto pb_s = superposition_setting(Party::B, alpha, beta, convention);
  BellTerms t;
  t.pA_prime = expectation(psi, pa_s, std::nullopt);
  t.pB_prime = expectation(psi, std::nullopt, pb_s);
  t.pA_prime_pB_prime = expectation(psi, pa_s, pb_s);
  t.pA_prime_pB = expectation(psi, pa_s, pb);
  t.pA_pB_prime = expectation(psi, pa, pb_s);
  t.pA_pB = expectation(psi, pa, pb);
  return t;
}

double s_closed_form(double alpha, double beta, ProjectorConvention convention) {
  validate_direction(alpha, beta);
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  return convention == ProjectorConvention::Operational ? a2 * (1.0 - 2.0 * b2)
                                                        : b2 * (1.0 - 2.0 * a2);
}

SValue s_value(double alpha, double beta, ProjectorConvention convention) {
  SValue v;
  v.closed_form = s_closed_form(alpha, beta, convention);
  v.terms = bell_terms(make_source_state(), alpha, beta, convention);
  v.oracle = combine(v.terms);
  return v;
}

Verdict check_inequality(double s) {
  if (s < -kInequalityTolerance) return Verdict::ViolatedBelow;
  if (s > 1.0 + kInequalityTolerance) return Verdict::ViolatedAbove;
  return Verdict::Satisfied;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "Satisfied";
    case Verdict::ViolatedBelow: return "ViolatedBelow";
    case Verdict::ViolatedAbove: return "ViolatedAbove";
  }
  return "?";
}

void validate(const EveStrategy& s) {
  if (s.targets == EveTargets::None) return;
  if (s.atoms.empty()) throw std::invalid_argument("eve strategy: no atoms");
  double total = 0.0;
  for (const auto& atom : s.atoms) {
    if (!(atom.weight > 0.0)) throw std::invalid_argument("eve strategy: weights must be > 0");
    total += atom.weight;
    if (s.targets != EveTargets::ArmB) validate(atom.eA);
    if (s.targets != EveTargets::ArmA) validate(atom.eB);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("eve strategy: weights sum to " + std::to_string(total));
  }
}

EveStrategy no_eve() { return EveStrategy{}; }

EveStrategy always_intercept(EveTargets targets, SuperpositionCoeffs eA,
                             SuperpositionCoeffs eB) {
  return EveStrategy{targets, {EveAtom{1.0, eA, eB}}};
}

Ensemble eve_channel(const EveStrategy& strategy, const StateVector& input) {
  validate(strategy);
  if (strategy.targets == EveTargets::None) return Ensemble{{{1.0, input}}};

  Ensemble out;
  for (const auto& atom : strategy.atoms) {
    std::vector<std::pair<double, StateVector>> branch{{atom.weight, input}};
    auto intercept = [&](ModeIndex arm, const SuperpositionCoeffs& e) {
      const Matrix2 p = projector(e);
      const Matrix2 q = complement(p);
      std::vector<std::pair<double, StateVector>> next;
      for (const auto& [w, psi] : branch) {
        // Amplitudes outside the {|0>,|1>} span go with the complement.
        for (auto [op, beyond] : {std::pair{p, Amplitude{0.0}}, std::pair{q, Amplitude{1.0}}}) {
          auto projected = apply_qubit_operator(psi, arm, op, beyond);
          const double born = projected.norm_squared();
          if (born == 0.0) continue;
          next.emplace_back(w * born, normalize(projected));
        }
      }
      branch = std::move(next);
    };
    if (strategy.targets == EveTargets::ArmA || strategy.targets == EveTargets::Both) {
      intercept(kModeA, atom.eA);
    }
    if (strategy.targets == EveTargets::ArmB || strategy.targets == EveTargets::Both) {
      intercept(kModeB, atom.eB);
    }
    for (auto& m : branch) out.members.push_back(std::move(m));
  }
  return out;
}

double ensemble_s(const Ensemble& ens, double alpha, double beta,
                  ProjectorConvention convention) {
  double s = 0.0;
  for (const auto& [p, psi] : ens.members) s += p * combine(bell_terms(psi, alpha, beta, convention));
  return s;
}

double s_with_eve(const EveStrategy& strategy, double alpha, double beta,
                  ProjectorConvention convention) {
  return ensemble_s(eve_channel(strategy, make_source_state()), alpha, beta, convention);
}

Amplitude eve_pa_literal(const SuperpositionCoeffs& eA, const ProjectorSetting& setting) {
  if (setting.party != Party::A) throw std::invalid_argument("eve_pa_literal: setting must be Alice's");
  validate(eA);
  const auto phi = make_source_state();
  const auto after_eve = apply_qubit_operator(phi, kModeA, projector(eA), 0.0);
  const auto after_alice =
      apply_qubit_operator(after_eve, kModeA, projector_matrix(setting), 0.0);
  return inner_product(phi, after_alice);
}

const char* to_string(EveTargets t) {
  switch (t) {
    case EveTargets::None: return "none";
    case EveTargets::ArmA: return "arm_A";
    case EveTargets::ArmB: return "arm_B";
    case EveTargets::Both: return "both";
  }
  return "?";
}

const char* to_string(ProjectorConvention c) {
  return c == ProjectorConvention::Operational ? "operational" : "literal";
}

const char* to_string(SettingKind k) {
  return k == SettingKind::Number ? "number" : "superposition";
}

}  // namespace srq
