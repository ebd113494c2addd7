#include "srq/optics.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace srq {

namespace {

// Binomial coefficient table row n, small n only.
double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

void validate(const BeamSplitter& bs) {
  if (!(bs.reflectivity >= 0.0 && bs.reflectivity <= 1.0)) {
    throw std::invalid_argument("beam splitter reflectivity must lie in [0, 1]");
  }
  if (bs.port_a == bs.port_b) {
    throw std::invalid_argument("beam splitter ports must differ");
  }
}

BeamSplitter inverse(const BeamSplitter& bs) {
  return BeamSplitter{bs.reflectivity, bs.port_b, bs.port_a};
}

std::array<std::array<double, 2>, 2> mode_matrix(const BeamSplitter& bs) {
  const double r = std::sqrt(bs.reflectivity);
  const double t = std::sqrt(1.0 - bs.reflectivity);
  return {{{r, t}, {-t, r}}};
}

StateVector apply_beam_splitter(const StateVector& state, const BeamSplitter& bs) {
  validate(bs);
  state.check_mode(bs.port_a);
  state.check_mode(bs.port_b);

  const double r = std::sqrt(bs.reflectivity);
  const double t = std::sqrt(1.0 - bs.reflectivity);
  const std::size_t sa = state.stride(bs.port_a);
  const std::size_t sb = state.stride(bs.port_b);
  const int cap = state.n_max();

  // sqrt(p! q!) for the monomials x^p y^q |0>.
  std::vector<double> sqrt_fact(2 * cap + 1);
  for (int n = 0; n <= 2 * cap; ++n) sqrt_fact[n] = std::sqrt(factorial(n));

  return StateVector::build(
      state.mode_count(), cap, [&](std::span<Amplitude> w, const StateVector&) {
        // Coefficients of x^p y^q, reused per basis state.
        std::vector<double> poly(static_cast<std::size_t>(2 * cap + 1) * (2 * cap + 1));
        const std::size_t row = 2 * cap + 1;
        for (std::size_t i = 0; i < state.dimension(); ++i) {
          const Amplitude amp = state.amplitude_at(i);
          if (amp == Amplitude{0.0, 0.0}) continue;
          const int na = state.occupation_of(i, bs.port_a);
          const int nb = state.occupation_of(i, bs.port_b);
          const std::size_t spectator = i - na * sa - nb * sb;
          std::fill(poly.begin(), poly.end(), 0.0);
          // (r x - t y)^na (t x + r y)^nb
          for (int k = 0; k <= na; ++k) {
            const double ck = binomial(na, k) * std::pow(r, k) *
                              std::pow(-t, na - k);
            for (int l = 0; l <= nb; ++l) {
              const double cl = binomial(nb, l) * std::pow(t, l) *
                                std::pow(r, nb - l);
              poly[(k + l) * row + (na - k + nb - l)] += ck * cl;
            }
          }
          const double inv_norm = 1.0 / (sqrt_fact[na] * sqrt_fact[nb]);
          const int total = na + nb;
          for (int p = 0; p <= total; ++p) {
            const int q = total - p;
            const double c = poly[p * row + q];
            if (c == 0.0) continue;
            const Amplitude out = amp * (c * sqrt_fact[p] * sqrt_fact[q] * inv_norm);
            if (p > cap || q > cap) {
              if (std::abs(out) >= kPruneThreshold) {
                throw TruncationOverflow(
                    "beam splitter output |" + std::to_string(p) + "," +
                    std::to_string(q) + "> exceeds n_max=" + std::to_string(cap));
              }
              continue;
            }
            w[spectator + p * sa + q * sb] += out;
          }
        }
      });
}

StateVector make_source_state(int n_max) {
  const auto photon = apply_creation(make_vacuum(2, n_max), kModeA);
  return apply_beam_splitter(photon, BeamSplitter{0.5, kModeA, kModeB});
}

}  // namespace srq
