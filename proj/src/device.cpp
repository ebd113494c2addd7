#include "srq/device.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "srq/optics.hpp"

namespace srq {

namespace {

Matrix2 outer_scaled(Amplitude v0, Amplitude v1, double weight) {
  return {{{weight * v0 * std::conj(v0), weight * v0 * std::conj(v1)},
           {weight * v1 * std::conj(v0), weight * v1 * std::conj(v1)}}};
}

}  // namespace

void validate(const SuperpositionCoeffs& u, double tol) {
  const double n = std::norm(u.c0) + std::norm(u.c1);
  if (!(std::abs(n - 1.0) <= tol)) {
    throw std::invalid_argument("superposition coefficients not normalized (|c0|^2+|c1|^2=" +
                                std::to_string(n) + ")");
  }
}

void validate(const ProbeState& p, double tol) {
  const double n = std::norm(p.g0) + std::norm(p.g1);
  if (!(std::abs(n - 1.0) <= tol)) {
    throw std::invalid_argument("probe state not normalized (|g0|^2+|g1|^2=" +
                                std::to_string(n) + ")");
  }
}

SuperpositionCoeffs orthogonal(const SuperpositionCoeffs& u) {
  return {std::conj(u.c1), -std::conj(u.c0)};
}

Matrix2 projector(const SuperpositionCoeffs& u) { return outer_scaled(u.c0, u.c1, 1.0); }

SuperpositionCoeffs canonical_phase(const SuperpositionCoeffs& u) {
  const Amplitude lead = std::abs(u.c0) > kPruneThreshold ? u.c0 : u.c1;
  const double mag = std::abs(lead);
  if (mag == 0.0) return u;
  const Amplitude phase = std::conj(lead) / mag;
  SuperpositionCoeffs out{u.c0 * phase, u.c1 * phase};
  if (std::abs(u.c0) > kPruneThreshold) {
    out.c0 = Amplitude{std::abs(u.c0), 0.0};
  } else {
    out.c0 = 0.0;
    out.c1 = Amplitude{std::abs(u.c1), 0.0};
  }
  return out;
}

DeviceTag classify(DetectorCounts counts) {
  if (counts.da == 1 && counts.db == 0) return DeviceTag::Plus;
  if (counts.da == 0 && counts.db == 1) return DeviceTag::Minus;
  return DeviceTag::Inconclusive;
}

ProbeState probe_for_direction(const SuperpositionCoeffs& u) {
  validate(u);
  ProbeState p{std::conj(u.c1), std::conj(u.c0)};
  const Amplitude lead = std::abs(p.g0) > kPruneThreshold ? p.g0 : p.g1;
  const Amplitude phase = std::conj(lead) / std::abs(lead);
  p.g0 *= phase;
  p.g1 *= phase;
  if (std::abs(p.g0) > kPruneThreshold) {
    p.g0 = Amplitude{std::abs(p.g0), 0.0};
  } else {
    p.g0 = 0.0;
    p.g1 = Amplitude{std::abs(p.g1), 0.0};
  }
  return p;
}

DevicePOVM device_povm(const ProbeState& probe) {
  validate(probe);
  const Amplitude g = probe.g0;
  const Amplitude d = probe.g1;
  DevicePOVM povm;
  povm.plus = outer_scaled(std::conj(d), std::conj(g), 0.5);
  povm.minus = outer_scaled(-std::conj(d), std::conj(g), 0.5);
  povm.inconclusive = {{{std::norm(g), 0.0}, {0.0, std::norm(d)}}};
  return povm;
}

double effect_probability(const Matrix2& e, const SuperpositionCoeffs& arm) {
  // <arm| E |arm>
  const Amplitude v0 = e[0][0] * arm.c0 + e[0][1] * arm.c1;
  const Amplitude v1 = e[1][0] * arm.c0 + e[1][1] * arm.c1;
  return (std::conj(arm.c0) * v0 + std::conj(arm.c1) * v1).real();
}

StateVector device_output(const StateVector& state, ModeIndex arm,
                          const ProbeState& probe) {
  state.check_mode(arm);
  validate(probe);
  if (state.n_max() < 2) {
    throw TruncationOverflow("measurement device needs n_max >= 2");
  }
  const auto probe_mode = StateVector::from_terms(
      1, state.n_max(), {{{0}, probe.g0}, {{1}, probe.g1}});
  const auto joint = tensor(state, probe_mode);
  const ModeIndex probe_index{state.mode_count()};
  return apply_beam_splitter(joint, BeamSplitter{0.5, probe_index, arm});
}

std::map<DetectorCounts, double> device_pattern_distribution(
    const StateVector& state, ModeIndex arm, const ProbeState& probe) {
  const auto out = device_output(state, arm, probe);
  const ModeIndex probe_index{state.mode_count()};
  std::map<DetectorCounts, double> dist;
  for (std::size_t i = 0; i < out.dimension(); ++i) {
    const double p = std::norm(out.amplitude_at(i));
    if (p == 0.0) continue;
    dist[{out.occupation_of(i, probe_index), out.occupation_of(i, arm)}] += p;
  }
  return dist;
}

std::pair<DeviceOutcome, StateVector> measure_device(const StateVector& state,
                                                     ModeIndex arm,
                                                     const ProbeState& probe,
                                                     SeededRng& rng) {
  const auto out = device_output(state, arm, probe);
  const ModeIndex probe_index{state.mode_count()};
  const std::array<ModeIndex, 2> detectors{probe_index, arm};
  auto [pattern, collapsed] = sample_number_measurement(out, detectors, rng);

  DeviceOutcome outcome;
  outcome.counts = {pattern[0], pattern[1]};
  outcome.tag = classify(outcome.counts);

  if (state.mode_count() == 1) {
    return {outcome, make_vacuum(1, state.n_max())};
  }
  auto rest = condition_on(collapsed, detectors, std::span<const int>(pattern));
  return {outcome, insert_vacuum_mode(normalize(rest), arm)};
}

std::map<Occupation, double> number_distribution(const StateVector& state,
                                                 std::span<const ModeIndex> modes) {
  for (auto m : modes) state.check_mode(m);
  std::map<Occupation, double> dist;
  Occupation key(modes.size());
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const double p = std::norm(state.amplitude_at(i));
    if (p == 0.0) continue;
    for (std::size_t k = 0; k < modes.size(); ++k) key[k] = state.occupation_of(i, modes[k]);
    dist[key] += p;
  }
  return dist;
}

std::pair<Occupation, StateVector> sample_number_measurement(
    const StateVector& state, std::span<const ModeIndex> modes, SeededRng& rng) {
  const auto dist = number_distribution(state, modes);
  if (dist.empty()) throw std::domain_error("sample_number_measurement: zero state");
  std::vector<Occupation> keys;
  std::vector<double> weights;
  for (const auto& [occ, p] : dist) {
    keys.push_back(occ);
    weights.push_back(p);
  }
  const std::size_t k = sample_discrete(weights, rng.uniform());
  const Occupation& chosen = keys[k];
  const double inv = 1.0 / std::sqrt(weights[k]);

  auto collapsed = StateVector::build(
      state.mode_count(), state.n_max(), [&](std::span<Amplitude> w, const StateVector&) {
        for (std::size_t i = 0; i < state.dimension(); ++i) {
          bool match = true;
          for (std::size_t j = 0; j < modes.size() && match; ++j) {
            match = state.occupation_of(i, modes[j]) == chosen[j];
          }
          if (match) w[i] = state.amplitude_at(i) * inv;
        }
      });
  return {chosen, std::move(collapsed)};
}

}  // namespace srq
