#pragma once

// Deterministic measurement through cavity QED.
//
// Each photonic arm feeds a resonant cavity holding a two-level atom injected in
// |g>. The exchange Hamiltonian lambda (sigma_+ a + sigma_- a^dag) rotates every
// pair {|g, n+1>, |e, n>} by the angle lambda t sqrt(n+1):
//
//   |g, n+1> ->  cos(theta_n)|g, n+1> - i sin(theta_n)|e, n>
//   |e, n>   ->  cos(theta_n)|e, n>   - i sin(theta_n)|g, n+1>
//
// At lambda t = pi/2 a single photon is handed to the atom. A Ramsey pulse then
// maps the chosen direction to |e> and an ionization detector reads out |e>
// versus |g>.
//
// Joint layout: modes 0, 1 are the photon fields of cavities A, B; modes 2, 3
// the atoms, with occupation 0 = |g>, 1 = |e>.

#include <utility>

#include "srq/bell.hpp"
#include "srq/device.hpp"
#include "srq/fock.hpp"
#include "srq/rng.hpp"

namespace srq {

struct AtomState {
  Amplitude cg{1.0, 0.0};
  Amplitude ce{0.0, 0.0};
};

struct JCParams {
  double lambda_t = 1.5707963267948966;
};

struct CavityJointState {
  StateVector state;
};

inline ModeIndex photon_mode(Party p) { return p == Party::A ? ModeIndex{0} : ModeIndex{1}; }
inline ModeIndex atom_mode(Party p) { return p == Party::A ? ModeIndex{2} : ModeIndex{3}; }

// |photons> |g>_A |g>_B
CavityJointState make_cavity_initial(const StateVector& photons);

CavityJointState jc_evolve(const CavityJointState& joint, Party cavity, const JCParams& params);

// Both cavities at the same lambda t.
CavityJointState jc_evolve_both(const CavityJointState& joint, const JCParams& params);

// The Ramsey unitary sending `direction` to |e> and its complement to |g>:
// rows (g, e) = (<u_perp|, <u|) with u_perp = (conj c1, -conj c0).
Matrix2 ramsey_unitary(const SuperpositionCoeffs& direction);

AtomState ramsey_rotation(const AtomState& atom, const SuperpositionCoeffs& direction);

enum class AtomOutcome { Plus, Minus };

// Ramsey pulse plus ionization on the party's atom. Plus means the detector
// fired. The returned state holds the atom in `direction` (Plus) or its
// complement (Minus), so an immediate repeat gives the same answer.
std::pair<AtomOutcome, CavityJointState> deterministic_measure(
    const CavityJointState& joint, Party party, const SuperpositionCoeffs& direction,
    SeededRng& rng);

// Probability of Plus without sampling.
double deterministic_plus_probability(const CavityJointState& joint, Party party,
                                      const SuperpositionCoeffs& direction);

// Photonic direction (c0, c1) seen on the atom after a pi/2 transfer, which
// maps |0> -> |g> and |1> -> -i|e>.
SuperpositionCoeffs transferred_direction(const SuperpositionCoeffs& photonic);

// (|e>_A|g>_B - |g>_A|e>_B)/sqrt(2) with both fields empty.
CavityJointState transfer_target();

// <Pi_A Pi_B> evaluated on the atoms; settings are photonic and are mapped
// through transferred_direction.
double atomic_expectation(const CavityJointState& joint,
                          const std::optional<ProjectorSetting>& a,
                          const std::optional<ProjectorSetting>& b);

BellTerms atomic_bell_terms(const CavityJointState& joint, double alpha, double beta,
                            ProjectorConvention convention = ProjectorConvention::Operational);

}  // namespace srq
