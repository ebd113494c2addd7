#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "srq/cavity.hpp"
#include "srq/optics.hpp"
#include "srq/sweep.hpp"

using namespace srq;
using Catch::Matchers::WithinAbs;

namespace {

const double kR3 = std::sqrt(3.0) / 2.0;
const double kHalfPi = std::acos(-1.0) / 2;

CavityJointState joint(std::vector<std::pair<Occupation, Amplitude>> terms) {
  return {StateVector::from_terms(4, 2, terms)};
}

// components |n>_field |e>_atom in cavity A that the dynamics keep inside n_max = 2
CavityJointState random_cavity_a(std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  return {normalize(StateVector::from_terms(4, 2,
                                            {{{0, 0, 0, 0}, {g(gen), g(gen)}},
                                             {{1, 0, 0, 0}, {g(gen), g(gen)}},
                                             {{2, 0, 0, 0}, {g(gen), g(gen)}},
                                             {{0, 0, 1, 0}, {g(gen), g(gen)}},
                                             {{1, 0, 1, 0}, {g(gen), g(gen)}},
                                             {{1, 1, 0, 0}, {g(gen), g(gen)}}}))};
}

}  // namespace

TEST_CASE("one photon is handed to the atom at pi/2", "[cavity]") {
  const auto out = jc_evolve(joint({{{1, 0, 0, 0}, 1.0}}), Party::A, {});
  CHECK(std::abs(out.state.amplitude({0, 0, 1, 0}) - Amplitude{0.0, -1.0}) < 1e-15);
  CHECK(std::abs(out.state.amplitude({1, 0, 0, 0})) < 1e-15);

  const auto back = jc_evolve(joint({{{0, 0, 1, 0}, 1.0}}), Party::A, {});
  CHECK(std::abs(back.state.amplitude({1, 0, 0, 0}) - Amplitude{0.0, -1.0}) < 1e-15);

  const auto vac = jc_evolve(joint({{{0, 0, 0, 0}, 1.0}}), Party::A, {});
  CHECK(vac.state.amplitude({0, 0, 0, 0}) == Amplitude{1.0, 0.0});

  const auto idle = jc_evolve(joint({{{1, 0, 0, 0}, 1.0}}), Party::B, {});
  CHECK(idle.state.amplitude({1, 0, 0, 0}) == Amplitude{1.0, 0.0});
}

TEST_CASE("two-photon doublet rotates by sqrt2", "[cavity]") {
  const double lt = 0.3;
  const auto out = jc_evolve(joint({{{2, 0, 0, 0}, 1.0}}), Party::A, {lt});
  CHECK_THAT(out.state.amplitude({2, 0, 0, 0}).real(), WithinAbs(std::cos(lt * std::sqrt(2.0)), 1e-15));
  CHECK_THAT(out.state.amplitude({1, 0, 1, 0}).imag(), WithinAbs(-std::sin(lt * std::sqrt(2.0)), 1e-15));
}

TEST_CASE("evolution is unitary and conserves excitations", "[cavity][property]") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> lt(0.0, 4 * kHalfPi);
  for (int trial = 0; trial < 100; ++trial) {
    const JCParams p{lt(gen)};
    const auto s = random_cavity_a(gen);
    const auto t = random_cavity_a(gen);
    const auto es = jc_evolve(s, Party::A, p);
    const auto et = jc_evolve(t, Party::A, p);
    CHECK_THAT(norm(es.state), WithinAbs(1.0, 1e-12));
    CHECK(std::abs(inner_product(es.state, et.state) - inner_product(s.state, t.state)) < 1e-12);

    // excitation number per sector
    std::array<double, 4> before{}, after{};
    for (const auto& [o, a] : s.state.terms()) before[o[0] + o[1] + o[2] + o[3]] += std::norm(a);
    for (const auto& [o, a] : es.state.terms()) after[o[0] + o[1] + o[2] + o[3]] += std::norm(a);
    for (int k = 0; k < 4; ++k) CHECK_THAT(after[k], WithinAbs(before[k], 1e-12));
  }
}

TEST_CASE("entangled photons become entangled atoms", "[cavity]") {
  const auto out = jc_evolve_both(make_cavity_initial(make_source_state()), {});
  CHECK(fidelity(out.state, transfer_target().state) >= 1.0 - 1e-10);
  // the field is left empty
  for (const auto& [o, a] : out.state.terms()) {
    CHECK(o[0] == 0);
    CHECK(o[1] == 0);
  }
}

TEST_CASE("Ramsey pulse examples", "[cavity]") {
  const auto id = ramsey_unitary({0.0, 1.0});
  CHECK(id[0][0] == Amplitude{1.0, 0.0});
  CHECK(id[1][1] == Amplitude{1.0, 0.0});
  CHECK(id[0][1] == Amplitude{0.0, 0.0});

  std::mt19937_64 gen(32);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const Amplitude a{g(gen), g(gen)}, b{g(gen), g(gen)};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    const SuperpositionCoeffs u{a / n, b / n};
    const auto up = ramsey_rotation({u.c0, u.c1}, u);
    CHECK(std::abs(up.cg) < 1e-12);
    CHECK_THAT(std::abs(up.ce), WithinAbs(1.0, 1e-12));
    const auto perp = orthogonal(u);
    const auto down = ramsey_rotation({perp.c0, perp.c1}, u);
    CHECK(std::abs(down.ce) < 1e-12);
  }
}

TEST_CASE("deterministic measurement repeats", "[cavity]") {
  const auto atoms = transfer_target();
  const auto dir = transferred_direction({0.5, kR3});
  for (std::uint64_t r = 0; r < 50; ++r) {
    SeededRng first(41, 0, r, 0);
    SeededRng second(41, 0, r, 1);
    const auto [o1, s1] = deterministic_measure(atoms, Party::A, dir, first);
    const auto [o2, s2] = deterministic_measure(s1, Party::A, dir, second);
    CHECK(o1 == o2);
    CHECK(same_state(s1.state, s2.state));
    CHECK_THAT(norm(s2.state), WithinAbs(1.0, 1e-12));
  }
  CHECK_THAT(deterministic_plus_probability(atoms, Party::A, dir), WithinAbs(0.5, 1e-12));
}

TEST_CASE("Plus frequency follows the atomic projector", "[cavity][statistics]") {
  const auto atoms = transfer_target();
  const auto dir = transferred_direction({kR3, 0.5});
  const double p = deterministic_plus_probability(atoms, Party::B, dir);
  const int n = 20000;
  int plus = 0;
  for (int i = 0; i < n; ++i) {
    SeededRng rng(42, 0, i, 2);
    if (deterministic_measure(atoms, Party::B, dir, rng).first == AtomOutcome::Plus) ++plus;
  }
  CHECK(std::abs(plus / double(n) - p) <= 4 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("atomic expectations equal the photonic ones", "[cavity]") {
  const auto atoms = jc_evolve_both(make_cavity_initial(make_source_state()), {});
  for (int k = 0; k <= 40; ++k) {
    const double a = k / 40.0;
    const double b = std::sqrt(1.0 - a * a);
    for (auto c : {ProjectorConvention::Operational, ProjectorConvention::Literal}) {
      const auto x = atomic_bell_terms(atoms, a, b, c);
      const auto y = bell_terms(make_source_state(), a, b, c);
      CHECK_THAT(x.pA_prime, WithinAbs(y.pA_prime, 1e-12));
      CHECK_THAT(x.pB_prime, WithinAbs(y.pB_prime, 1e-12));
      CHECK_THAT(x.pA_prime_pB_prime, WithinAbs(y.pA_prime_pB_prime, 1e-12));
      CHECK_THAT(x.pA_prime_pB, WithinAbs(y.pA_prime_pB, 1e-12));
      CHECK_THAT(x.pA_pB_prime, WithinAbs(y.pA_pB_prime, 1e-12));
      CHECK_THAT(x.pA_pB, WithinAbs(y.pA_pB, 1e-12));
    }
  }
}

TEST_CASE("transfer keeps photonic statistics of intercepted states", "[cavity][property]") {
  const auto strategies = random_strategies(50, 33);
  for (const auto& s : strategies) {
    for (const auto& [w, psi] : eve_channel(s, make_source_state()).members) {
      const auto atoms = jc_evolve_both(make_cavity_initial(psi), {});
      CHECK_THAT(combine(atomic_bell_terms(atoms, 0.5, kR3)),
                 WithinAbs(combine(bell_terms(psi, 0.5, kR3)), 1e-12));
    }
  }
}

TEST_CASE("cavity errors", "[cavity]") {
  CHECK_THROWS_AS(jc_evolve(joint({{{2, 0, 1, 0}, 1.0}}), Party::A, {}), TruncationOverflow);
  CHECK_THROWS_AS(jc_evolve(joint({{{0, 0, 2, 0}, 1.0}}), Party::A, {}), std::invalid_argument);
  CHECK_THROWS_AS(jc_evolve({make_vacuum(3)}, Party::A, {}), ShapeMismatch);
  CHECK_THROWS_AS(jc_evolve(joint({{{0, 0, 0, 0}, 1.0}}), Party::A, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_cavity_initial(make_vacuum(3)), ShapeMismatch);
}
