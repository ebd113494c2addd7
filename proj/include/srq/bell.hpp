#pragma once

// Bell-Peres test for the single-photon entangled pair.
//
// Four projectors act on modes A (Alice) and B (Bob): the number projectors
// P_A = |1><1|_A, P_B = |1><1|_B and the superposition projectors P'_A, P'_B.
// The statistic
//
//   S = <P'_A> + <P'_B> - <P'_A P'_B> - <P'_A P_B> - <P_A P'_B> + <P_A P_B>
//
// lies in [0, 1] for every local hidden-variable model. For the source state
// S = |alpha|^2 (1 - 2|beta|^2), which drops below zero once |beta| > 1/sqrt(2).
//
// Superposition directions come in two conventions. `Literal` takes the
// written kets, alpha|0> + beta|1> for Alice and alpha|0> - beta|1> for Bob.
// `Operational` takes what the linear-optics device actually projects onto
// when fed the probe (alpha, beta): (beta, alpha) for Alice and (beta, -alpha)
// for Bob. Only the operational convention reproduces the expectation table
//   <P'_A> = <P'_B> = 1/2, <P'_A P_B> = <P_A P'_B> = |beta|^2/2,
//   <P_A P_B> = 0, <P'_A P'_B> = 2|alpha beta|^2.

#include <optional>
#include <utility>
#include <vector>

#include "srq/device.hpp"
#include "srq/fock.hpp"

namespace srq {

enum class Party { A, B };
enum class SettingKind { Number, Superposition };
enum class ProjectorConvention { Operational, Literal };

inline ModeIndex mode_of(Party p) { return p == Party::A ? ModeIndex{0} : ModeIndex{1}; }

struct ProjectorSetting {
  SettingKind kind = SettingKind::Number;
  SuperpositionCoeffs direction;  // Superposition only
  Party party = Party::A;
};

SuperpositionCoeffs superposition_direction(Party party, double alpha, double beta,
                                            ProjectorConvention convention);

ProjectorSetting number_setting(Party party);
ProjectorSetting superposition_setting(Party party, double alpha, double beta,
                                       ProjectorConvention convention);

// The projector on the party's {|0>,|1>} span.
Matrix2 projector_matrix(const ProjectorSetting& s);

// Pi_A Pi_B |psi>; an absent setting is the identity.
StateVector apply_settings(const StateVector& psi,
                           const std::optional<ProjectorSetting>& a,
                           const std::optional<ProjectorSetting>& b);

// <psi| Pi_A Pi_B |psi> for a two-mode (A, B) state.
double expectation(const StateVector& psi, const std::optional<ProjectorSetting>& a,
                   const std::optional<ProjectorSetting>& b);

// expectation() on the source state.
double expectation_oracle(const std::optional<ProjectorSetting>& a,
                          const std::optional<ProjectorSetting>& b);

struct BellTerms {
  double pA_prime = 0.0;
  double pB_prime = 0.0;
  double pA_prime_pB_prime = 0.0;
  double pA_prime_pB = 0.0;
  double pA_pB_prime = 0.0;
  double pA_pB = 0.0;
};

double combine(const BellTerms& t);

BellTerms bell_terms(const StateVector& psi, double alpha, double beta,
                     ProjectorConvention convention = ProjectorConvention::Operational);

struct SValue {
  double closed_form = 0.0;
  double oracle = 0.0;
  BellTerms terms;
};

// Closed form |alpha|^2(1-2|beta|^2) (operational) or |beta|^2(1-2|alpha|^2)
// (literal), alongside the projector-algebra assembly on the source state.
SValue s_value(double alpha, double beta,
               ProjectorConvention convention = ProjectorConvention::Operational);

double s_closed_form(double alpha, double beta, ProjectorConvention convention);

void validate_direction(double alpha, double beta);

enum class Verdict { Satisfied, ViolatedBelow, ViolatedAbove };

inline constexpr double kInequalityTolerance = 1e-12;
Verdict check_inequality(double s);

const char* to_string(Verdict v);

// ---- eavesdropping -------------------------------------------------------

enum class EveTargets { None, ArmA, ArmB, Both };

struct EveAtom {
  double weight = 1.0;
  SuperpositionCoeffs eA;
  SuperpositionCoeffs eB;
};

// Discrete intercept-resend strategy: with probability `weight`, Eve measures
// {|eA><eA|, 1 - |eA><eA|} on arm A and/or the analogue on B, then forwards
// the collapsed state.
struct EveStrategy {
  EveTargets targets = EveTargets::None;
  std::vector<EveAtom> atoms;
};

void validate(const EveStrategy& s);
EveStrategy no_eve();
EveStrategy always_intercept(EveTargets targets, SuperpositionCoeffs eA,
                             SuperpositionCoeffs eB = {});

struct Ensemble {
  std::vector<std::pair<double, StateVector>> members;
};

Ensemble eve_channel(const EveStrategy& strategy, const StateVector& input);

double ensemble_s(const Ensemble& ens, double alpha, double beta,
                  ProjectorConvention convention = ProjectorConvention::Operational);

double s_with_eve(const EveStrategy& strategy, double alpha, double beta,
                  ProjectorConvention convention = ProjectorConvention::Operational);

// <phi| P'_A P_{|eA>} |phi> taken literally as an operator product. The two
// projectors do not commute, so the value is complex in general.
Amplitude eve_pa_literal(const SuperpositionCoeffs& eA, const ProjectorSetting& setting);

const char* to_string(EveTargets t);
const char* to_string(ProjectorConvention c);
const char* to_string(SettingKind k);

}  // namespace srq
