#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "srq/fock.hpp"
#include "srq/optics.hpp"

using namespace srq;
using Catch::Matchers::WithinAbs;

namespace {

StateVector basis(std::size_t modes, int n_max, Occupation occ) {
  return StateVector::from_terms(modes, n_max, {{std::move(occ), 1.0}});
}

StateVector random_state(std::mt19937_64& gen, std::size_t modes, int n_max) {
  std::normal_distribution<double> g;
  return normalize(StateVector::build(modes, n_max, [&](std::span<Amplitude> w, const StateVector&) {
    for (auto& a : w) a = {g(gen), g(gen)};
  }));
}

}  // namespace

TEST_CASE("vacuum has a single unit amplitude", "[fock]") {
  const auto v = make_vacuum(2, 2);
  const auto t = v.terms();
  REQUIRE(t.size() == 1);
  CHECK(t[0].first == Occupation{0, 0});
  CHECK(t[0].second == Amplitude{1.0, 0.0});
  CHECK_THAT(norm(make_vacuum(4, 2)), WithinAbs(1.0, 1e-15));
}

TEST_CASE("invalid shapes are rejected", "[fock]") {
  CHECK_THROWS_AS(make_vacuum(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_vacuum(2, 0), std::invalid_argument);
  const auto v = make_vacuum(2, 2);
  CHECK_THROWS_AS(apply_creation(v, ModeIndex{2}), std::out_of_range);
  CHECK_THROWS_AS(inner_product(v, make_vacuum(3, 2)), ShapeMismatch);
  CHECK_THROWS_AS(inner_product(v, make_vacuum(2, 3)), ShapeMismatch);
  CHECK_THROWS_AS(fidelity(v, make_vacuum(1, 2)), ShapeMismatch);
}

TEST_CASE("creation follows the ladder rule and respects the cap", "[fock]") {
  const auto one = apply_creation(make_vacuum(1, 2), ModeIndex{0});
  CHECK(one.amplitude({1}) == Amplitude{1.0, 0.0});
  const auto two = apply_creation(one, ModeIndex{0});
  CHECK_THAT(two.amplitude({2}).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK_THROWS_AS(apply_creation(basis(1, 2, {2}), ModeIndex{0}), TruncationOverflow);
}

TEST_CASE("two creations then two annihilations give 2 x vacuum", "[fock]") {
  // n! factors: sqrt(1) sqrt(2) on the way up, sqrt(2) sqrt(1) on the way down.
  auto s = make_vacuum(2, 2);
  s = apply_creation(apply_creation(s, ModeIndex{0}), ModeIndex{0});
  s = apply_annihilation(apply_annihilation(s, ModeIndex{0}), ModeIndex{0});
  CHECK_THAT(s.amplitude({0, 0}).real(), WithinAbs(2.0, 1e-14));
  CHECK(s.terms().size() == 1);
}

TEST_CASE("a a^dag = n + 1 on every basis state", "[fock][property]") {
  for (std::size_t modes = 1; modes <= 3; ++modes) {
    const auto shape = make_vacuum(modes, 2);
    for (std::size_t i = 0; i < shape.dimension(); ++i) {
      const auto occ = shape.occupation_of(i);
      const auto b = basis(modes, 2, occ);
      for (std::size_t m = 0; m < modes; ++m) {
        if (occ[m] == 2) {
          CHECK_THROWS_AS(apply_creation(b, ModeIndex{m}), TruncationOverflow);
          continue;
        }
        const auto r = apply_annihilation(apply_creation(b, ModeIndex{m}), ModeIndex{m});
        CHECK(same_state(r, b));
        CHECK_THAT(norm(r), WithinAbs(occ[m] + 1.0, 1e-13));
      }
    }
  }
}

TEST_CASE("inner products and fidelity on the source state", "[fock]") {
  const auto phi = make_source_state();
  CHECK_THAT(inner_product(phi, phi).real(), WithinAbs(1.0, 1e-15));
  CHECK(inner_product(basis(2, 2, {1, 0}), basis(2, 2, {0, 1})) == Amplitude{0.0, 0.0});
  CHECK_THAT(inner_product(phi, basis(2, 2, {1, 0})).real(), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THAT(fidelity(basis(2, 2, {1, 0}), phi), WithinAbs(0.5, 1e-15));
  CHECK_THAT(fidelity(phi, phi), WithinAbs(1.0, 1e-15));
}

TEST_CASE("inner product is conjugate-linear in the first slot", "[fock][property]") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_state(gen, 2, 2);
    const auto y = random_state(gen, 2, 2);
    const Amplitude c{0.3, -1.7};
    const auto lhs = inner_product(scale(x, c), y);
    const auto rhs = std::conj(c) * inner_product(x, y);
    CHECK(std::abs(lhs - rhs) < 1e-13);
    const auto xx = inner_product(x, x);
    CHECK(std::abs(xx.imag()) < 1e-15);
    CHECK(xx.real() >= 0.0);
  }
}

TEST_CASE("tensor orders modes left to right", "[fock]") {
  const auto t = tensor(basis(1, 2, {0}), basis(1, 2, {1}));
  REQUIRE(t.mode_count() == 2);
  CHECK(t.amplitude({0, 1}) == Amplitude{1.0, 0.0});
  CHECK(t.terms().size() == 1);
}

TEST_CASE("conditioning and vacuum insertion keep mode order", "[fock]") {
  const auto s = StateVector::from_terms(3, 2, {{{1, 0, 2}, 0.6}, {{1, 1, 0}, 0.8}, {{0, 0, 1}, 1.0}});
  const std::array<ModeIndex, 1> m{ModeIndex{0}};
  const std::array<int, 1> pat{1};
  const auto c = condition_on(s, m, pat);
  REQUIRE(c.mode_count() == 2);
  CHECK_THAT(c.amplitude({0, 2}).real(), WithinAbs(0.6, 1e-15));
  CHECK_THAT(c.amplitude({1, 0}).real(), WithinAbs(0.8, 1e-15));
  CHECK_THAT(c.norm_squared(), WithinAbs(1.0, 1e-15));
  const auto back = insert_vacuum_mode(c, ModeIndex{1});
  CHECK_THAT(back.amplitude({0, 0, 2}).real(), WithinAbs(0.6, 1e-15));
  CHECK_THAT(back.amplitude({1, 0, 0}).real(), WithinAbs(0.8, 1e-15));
}

TEST_CASE("tiny amplitudes are pruned to exact zero", "[fock]") {
  const auto s = StateVector::from_terms(1, 2, {{{0}, 1.0}, {{1}, 1e-16}});
  CHECK(s.amplitude({1}) == Amplitude{0.0, 0.0});
  CHECK(s.terms().size() == 1);
  CHECK_THROWS_AS(StateVector::from_terms(1, 2, {{{0}, NAN}}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::from_terms(1, 2, {{{3}, 1.0}}), TruncationOverflow);
}

TEST_CASE("qubit operator treats the {0,1} span and passes |2> by `beyond`", "[fock]") {
  const auto s = StateVector::from_terms(1, 2, {{{0}, 0.6}, {{2}, 0.8}});
  const Matrix2 flip{{{0.0, 1.0}, {1.0, 0.0}}};
  const auto out = apply_qubit_operator(s, ModeIndex{0}, flip, 1.0);
  CHECK_THAT(out.amplitude({1}).real(), WithinAbs(0.6, 1e-15));
  CHECK_THAT(out.amplitude({2}).real(), WithinAbs(0.8, 1e-15));
  const auto cut = apply_qubit_operator(s, ModeIndex{0}, flip, 0.0);
  CHECK(cut.amplitude({2}) == Amplitude{0.0, 0.0});
}
