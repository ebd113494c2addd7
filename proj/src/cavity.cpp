#include "srq/cavity.hpp"

#include <cmath>
#include <string>

namespace srq {

namespace {

Matrix2 adjoint(const Matrix2& m) {
  return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

void check_atoms(const StateVector& s) {
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    if (s.amplitude_at(i) == Amplitude{0.0, 0.0}) continue;
    if (s.occupation_of(i, atom_mode(Party::A)) > 1 || s.occupation_of(i, atom_mode(Party::B)) > 1) {
      throw std::invalid_argument("cavity state: atom slot above |e>");
    }
  }
}

void check_layout(const CavityJointState& joint) {
  if (joint.state.mode_count() != 4) {
    throw ShapeMismatch("cavity joint state must have 4 modes");
  }
}

}  // namespace

CavityJointState make_cavity_initial(const StateVector& photons) {
  if (photons.mode_count() != 2) throw ShapeMismatch("cavity input must have 2 photon modes");
  return {tensor(photons, make_vacuum(2, photons.n_max()))};
}

CavityJointState jc_evolve(const CavityJointState& joint, Party cavity, const JCParams& params) {
  check_layout(joint);
  if (!(params.lambda_t >= 0.0)) throw std::invalid_argument("lambda_t must be >= 0");
  const StateVector& s = joint.state;
  check_atoms(s);
  const ModeIndex field = photon_mode(cavity);
  const ModeIndex atom = atom_mode(cavity);
  const std::size_t sf = s.stride(field);
  const std::size_t sa = s.stride(atom);
  const int cap = s.n_max();

  auto out = StateVector::build(4, cap, [&](std::span<Amplitude> w, const StateVector&) {
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      const Amplitude amp = s.amplitude_at(i);
      if (amp == Amplitude{0.0, 0.0}) continue;
      const int n = s.occupation_of(i, field);
      const int e = s.occupation_of(i, atom);
      if (e == 0 && n == 0) {
        w[i] += amp;
        continue;
      }
      // k = photons in the |g, k> member of the doublet
      const int k = e == 0 ? n : n + 1;
      const double theta = params.lambda_t * std::sqrt(static_cast<double>(k));
      const double c = std::cos(theta);
      const double sn = std::sin(theta);
      if (e == 1 && n == cap) {
        if (sn != 0.0) {
          throw TruncationOverflow("jc_evolve: |e," + std::to_string(n) +
                                   "> couples above n_max=" + std::to_string(cap));
        }
        w[i] += c * amp;
        continue;
      }
      const Amplitude mix = Amplitude{0.0, -sn} * amp;
      w[i] += c * amp;
      if (e == 0) {
        w[i - sf + sa] += mix;  // |g,n> -> |e,n-1>
      } else {
        w[i + sf - sa] += mix;  // |e,n> -> |g,n+1>
      }
    }
  });
  return {std::move(out)};
}

CavityJointState jc_evolve_both(const CavityJointState& joint, const JCParams& params) {
  return jc_evolve(jc_evolve(joint, Party::A, params), Party::B, params);
}

Matrix2 ramsey_unitary(const SuperpositionCoeffs& u) {
  validate(u);
  return {{{u.c1, -u.c0}, {std::conj(u.c0), std::conj(u.c1)}}};
}

AtomState ramsey_rotation(const AtomState& atom, const SuperpositionCoeffs& direction) {
  const Matrix2 m = ramsey_unitary(direction);
  return {m[0][0] * atom.cg + m[0][1] * atom.ce, m[1][0] * atom.cg + m[1][1] * atom.ce};
}

std::pair<AtomOutcome, CavityJointState> deterministic_measure(
    const CavityJointState& joint, Party party, const SuperpositionCoeffs& direction,
    SeededRng& rng) {
  check_layout(joint);
  const ModeIndex atom = atom_mode(party);
  const Matrix2 u = ramsey_unitary(direction);
  const auto rotated = apply_qubit_operator(joint.state, atom, u, 0.0);
  const std::array<ModeIndex, 1> detector{atom};
  auto [click, collapsed] = sample_number_measurement(rotated, detector, rng);
  // Undo the pulse so the atom is left along the measured direction.
  auto restored = apply_qubit_operator(collapsed, atom, adjoint(u), 0.0);
  return {click[0] == 1 ? AtomOutcome::Plus : AtomOutcome::Minus, {std::move(restored)}};
}

double deterministic_plus_probability(const CavityJointState& joint, Party party,
                                      const SuperpositionCoeffs& direction) {
  check_layout(joint);
  return apply_qubit_operator(joint.state, atom_mode(party), projector(direction), 0.0)
      .norm_squared();
}

SuperpositionCoeffs transferred_direction(const SuperpositionCoeffs& photonic) {
  return {photonic.c0, Amplitude{0.0, -1.0} * photonic.c1};
}

CavityJointState transfer_target() {
  const double h = 1.0 / std::sqrt(2.0);
  return {StateVector::from_terms(4, 2, {{{0, 0, 1, 0}, h}, {{0, 0, 0, 1}, -h}})};
}

double atomic_expectation(const CavityJointState& joint,
                          const std::optional<ProjectorSetting>& a,
                          const std::optional<ProjectorSetting>& b) {
  check_layout(joint);
  StateVector out = joint.state;
  for (const auto* s : {&a, &b}) {
    if (!s->has_value()) continue;
    const auto& setting = **s;
    const Matrix2 p = setting.kind == SettingKind::Number
                          ? projector(SuperpositionCoeffs{0.0, 1.0})
                          : projector(transferred_direction(setting.direction));
    out = apply_qubit_operator(out, atom_mode(setting.party), p, 0.0);
  }
  return out.norm_squared();
}

BellTerms atomic_bell_terms(const CavityJointState& joint, double alpha, double beta,
                            ProjectorConvention convention) {
  const auto pa = number_setting(Party::A);
  const auto pb = number_setting(Party::B);
  const auto pa_s = superposition_setting(Party::A, alpha, beta, convention);
  const auto pb_s = superposition_setting(Party::B, alpha, beta, convention);
  BellTerms t;
  t.pA_prime = atomic_expectation(joint, pa_s, std::nullopt);
  t.pB_prime = atomic_expectation(joint, std::nullopt, pb_s);
  t.pA_prime_pB_prime = atomic_expectation(joint, pa_s, pb_s);
  t.pA_prime_pB = atomic_expectation(joint, pa_s, pb);
  t.pA_pB_prime = atomic_expectation(joint, pa, pb_s);
  t.pA_pB = atomic_expectation(joint, pa, pb);
  return t;
}

}  // namespace srq
