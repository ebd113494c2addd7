#include "srq/protocol.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include "srq/cavity.hpp"
#include "srq/optics.hpp"

namespace srq {

namespace {

const SuperpositionCoeffs kExcited{0.0, 1.0};

struct RoundContext {
  const ProtocolConfig& config;
  Ensemble photons;
  std::vector<CavityJointState> atoms;  // Cavity backend: members after transfer
  std::vector<double> weights;
  std::array<SuperpositionCoeffs, 2> direction;
  std::array<SuperpositionCoeffs, 2> atom_direction;
  std::array<ProbeState, 2> probe;
};

RoundContext make_context(const ProtocolConfig& config) {
  RoundContext ctx{config, eve_channel(config.eve, make_source_state()), {}, {}, {}, {}, {}};
  for (const auto& [p, psi] : ctx.photons.members) {
    ctx.weights.push_back(p);
    if (config.backend == Backend::Cavity) {
      ctx.atoms.push_back(jc_evolve_both(make_cavity_initial(psi), JCParams{}));
    }
  }
  for (Party party : {Party::A, Party::B}) {
    const auto k = static_cast<std::size_t>(party);
    ctx.direction[k] = superposition_direction(party, ctx.config.alpha, ctx.config.beta,
                                               ctx.config.convention);
    ctx.atom_direction[k] = transferred_direction(ctx.direction[k]);
    ctx.probe[k] = probe_for_direction(ctx.direction[k]);
  }
  return ctx;
}

struct PartyResult {
  Outcome outcome = Outcome::NoClick;
  bool lost = false;
};

std::pair<PartyResult, StateVector> measure_photonic(const RoundContext& ctx,
                                                     const StateVector& state, Party party,
                                                     SettingKind setting, SeededRng& rng) {
  const ModeIndex mode = mode_of(party);
  const auto k = static_cast<std::size_t>(party);
  const double eta = ctx.config.eta;

  if (setting == SettingKind::Number) {
    const std::array<ModeIndex, 1> modes{mode};
    auto [occ, collapsed] = sample_number_measurement(state, modes, rng);
    const int survivors = thin_photons(occ[0], eta, rng);
    return {{survivors > 0 ? Outcome::Click : Outcome::NoClick, survivors < occ[0]},
            std::move(collapsed)};
  }

  if (ctx.config.backend == Backend::OpticsDevice) {
    auto [outcome, collapsed] = measure_device(state, mode, ctx.probe[k], rng);
    const DetectorCounts seen = apply_loss(outcome.counts, eta, rng);
    Outcome o = Outcome::Inconclusive;
    switch (classify(seen)) {
      case DeviceTag::Plus: o = Outcome::Plus; break;
      case DeviceTag::Minus: o = Outcome::Minus; break;
      case DeviceTag::Inconclusive: break;
    }
    return {{o, seen != outcome.counts}, std::move(collapsed)};
  }

  // Ideal two-outcome projector on the {|0>,|1>} span.
  const Matrix2 p = projector(ctx.direction[k]);
  auto plus = apply_qubit_operator(state, mode, p, 0.0);
  const double p_plus = plus.norm_squared();
  if (rng.uniform() < p_plus) return {{Outcome::Plus, false}, normalize(plus)};
  const Matrix2 q{{{1.0 - p[0][0], -p[0][1]}, {-p[1][0], 1.0 - p[1][1]}}};
  return {{Outcome::Minus, false}, normalize(apply_qubit_operator(state, mode, q, 1.0))};
}

std::pair<PartyResult, CavityJointState> measure_atomic(const RoundContext& ctx,
                                                        const CavityJointState& joint,
                                                        Party party, SettingKind setting,
                                                        SeededRng& rng) {
  const auto k = static_cast<std::size_t>(party);
  const auto& dir = setting == SettingKind::Number ? kExcited : ctx.atom_direction[k];
  auto [fired, collapsed] = deterministic_measure(joint, party, dir, rng);
  bool click = fired == AtomOutcome::Plus;
  bool lost = false;
  if (click && thin_photons(1, ctx.config.eta, rng) == 0) {
    click = false;
    lost = true;
  }
  Outcome o;
  if (setting == SettingKind::Number) {
    o = click ? Outcome::Click : Outcome::NoClick;
  } else {
    o = click ? Outcome::Plus : Outcome::Minus;
  }
  return {{o, lost}, std::move(collapsed)};
}

RoundRecord simulate_round(const RoundContext& ctx, std::uint64_t round) {
  const auto& cfg = ctx.config;
  SeededRng source(cfg.seed, cfg.run_index, round, stream::kSource);
  SeededRng alice(cfg.seed, cfg.run_index, round, stream::kAlice);
  SeededRng bob(cfg.seed, cfg.run_index, round, stream::kBob);
  SeededRng pub(cfg.seed, cfg.run_index, round, stream::kPublic);

  RoundRecord rec;
  rec.round_id = round;
  if (cfg.forced_settings) {
    rec.alice_setting = cfg.forced_settings->first;
    rec.bob_setting = cfg.forced_settings->second;
  } else {
    rec.alice_setting = alice.uniform() < 0.5 ? SettingKind::Number : SettingKind::Superposition;
    rec.bob_setting = bob.uniform() < 0.5 ? SettingKind::Number : SettingKind::Superposition;
  }

  const std::size_t member =
      ctx.weights.size() == 1 ? 0 : sample_discrete(ctx.weights, source.uniform());

  PartyResult ra;
  PartyResult rb;
  if (cfg.backend == Backend::Cavity) {
    auto [a, after] = measure_atomic(ctx, ctx.atoms[member], Party::A, rec.alice_setting, alice);
    ra = a;
    rb = measure_atomic(ctx, after, Party::B, rec.bob_setting, bob).first;
  } else {
    auto [a, after] = measure_photonic(ctx, ctx.photons.members[member].second, Party::A,
                                       rec.alice_setting, alice);
    ra = a;
    rb = measure_photonic(ctx, after, Party::B, rec.bob_setting, bob).first;
  }
  rec.alice_outcome = ra.outcome;
  rec.bob_outcome = rb.outcome;
  rec.lost = {ra.lost, rb.lost};

  rec.key_round = rec.alice_setting == SettingKind::Number && rec.bob_setting == SettingKind::Number;
  const double fraction = rec.key_round ? cfg.key_sacrifice_fraction : cfg.bell_sample_fraction;
  rec.bell_sample = pub.uniform() < fraction;
  return rec;
}

bool plus(Outcome o) { return o == Outcome::Plus; }
bool click(Outcome o) { return o == Outcome::Click; }

}  // namespace

void validate(const ProtocolConfig& c) {
  validate_direction(c.alpha, c.beta);
  if (c.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (!(c.eta > 0.0 && c.eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  if (!(c.bell_sample_fraction > 0.0 && c.bell_sample_fraction <= 1.0)) {
    throw std::invalid_argument("bell_sample_fraction must lie in (0, 1]");
  }
  if (!(c.key_sacrifice_fraction >= 0.0 && c.key_sacrifice_fraction <= 1.0)) {
    throw std::invalid_argument("key_sacrifice_fraction must lie in [0, 1]");
  }
  if (!(c.detection_sigma > 0.0)) throw std::invalid_argument("detection_sigma must be > 0");
  validate(c.eve);
}

int thin_photons(int photons, double eta, SeededRng& rng) {
  if (eta >= 1.0) return photons;
  int kept = 0;
  for (int i = 0; i < photons; ++i) kept += rng.bernoulli(eta) ? 1 : 0;
  return kept;
}

Outcome apply_loss(Outcome outcome, double eta, SeededRng& rng) {
  if (outcome == Outcome::Click && thin_photons(1, eta, rng) == 0) return Outcome::NoClick;
  return outcome;
}

DetectorCounts apply_loss(DetectorCounts counts, double eta, SeededRng& rng) {
  return {thin_photons(counts.da, eta, rng), thin_photons(counts.db, eta, rng)};
}

SEstimate estimate_s(std::span<const RoundRecord> records, Backend backend,
                     std::uint64_t min_cell_samples) {
  SEstimate est;
  using S = SettingKind;
  for (const auto& r : records) {
    if (!r.bell_sample) continue;
    const bool a_sup = r.alice_setting == S::Superposition;
    const bool b_sup = r.bob_setting == S::Superposition;
    auto tally = [&](Cell c, bool hit) {
      ++est.samples[c];
      if (hit) ++est.hits[c];
    };
    if (a_sup) tally(kCellAPrime, plus(r.alice_outcome));
    if (b_sup) tally(kCellBPrime, plus(r.bob_outcome));
    if (a_sup && b_sup) tally(kCellAPrimeBPrime, plus(r.alice_outcome) && plus(r.bob_outcome));
    if (a_sup && !b_sup) tally(kCellAPrimeB, plus(r.alice_outcome) && click(r.bob_outcome));
    if (!a_sup && b_sup) tally(kCellABPrime, click(r.alice_outcome) && plus(r.bob_outcome));
    if (!a_sup && !b_sup) tally(kCellAB, click(r.alice_outcome) && click(r.bob_outcome));
  }

  const double k = backend == Backend::OpticsDevice ? 2.0 : 1.0;
  const std::array<double, kCellCount> scale{k, k, k * k, k, k, 1.0};
  const std::array<double, kCellCount> sign{1, 1, -1, -1, -1, 1};
  std::array<double, kCellCount> value{};
  double var = 0.0;
  est.sufficient = true;
  for (std::size_t c = 0; c < kCellCount; ++c) {
    const auto n = est.samples[c];
    if (n < min_cell_samples || n == 0) {
      est.sufficient = false;
      continue;
    }
    const double f = static_cast<double>(est.hits[c]) / static_cast<double>(n);
    value[c] = scale[c] * f;
    est.s += sign[c] * value[c];
    var += scale[c] * scale[c] * f * (1.0 - f) / static_cast<double>(n);
  }
  est.terms = BellTerms{value[kCellAPrime], value[kCellBPrime], value[kCellAPrimeBPrime],
                        value[kCellAPrimeB], value[kCellABPrime], value[kCellAB]};
  est.standard_error = std::sqrt(var);
  return est;
}

ProtocolResult summarize(const ProtocolConfig& config, std::span<const RoundRecord> records) {
  ProtocolResult res;
  res.rounds = records.size();
  std::uint64_t mismatches = 0;
  for (const auto& r : records) {
    if (!r.key_round) continue;
    ++res.sifted_rounds;
    if (r.bell_sample) {
      ++res.sacrificed_rounds;
      continue;
    }
    const char a = click(r.alice_outcome) ? '1' : '0';
    const char b = click(r.bob_outcome) ? '0' : '1';
    res.sifted_key_alice.push_back(a);
    res.sifted_key_bob.push_back(b);
    if (a != b) ++mismatches;
  }
  res.sift_fraction = res.rounds ? static_cast<double>(res.sifted_rounds) / res.rounds : 0.0;
  if (!res.sifted_key_alice.empty()) {
    res.key_disagreement_rate =
        static_cast<double>(mismatches) / static_cast<double>(res.sifted_key_alice.size());
  }

  res.estimate = estimate_s(records, config.backend, config.min_cell_samples);
  res.s_estimate = res.estimate.s;
  res.s_stderr = res.estimate.standard_error;
  res.s_expected = s_closed_form(config.alpha, config.beta, config.convention);
  if (!res.estimate.sufficient) {
    res.verdict = ProtocolVerdict::InsufficientData;
  } else if (std::abs(res.s_estimate - res.s_expected) > config.detection_sigma * res.s_stderr) {
    res.verdict = ProtocolVerdict::EveDetected;
  } else {
    res.verdict = ProtocolVerdict::Secure;
  }
  return res;
}

ProtocolRun run_protocol(const ProtocolConfig& config, Execution execution) {
  validate(config);
  const RoundContext ctx = make_context(config);
  std::vector<RoundRecord> records(config.rounds);
  const auto n = static_cast<std::int64_t>(config.rounds);

  if (execution == Execution::Serial) {
    for (std::int64_t r = 0; r < n; ++r) records[r] = simulate_round(ctx, r);
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      try {
        records[r] = simulate_round(ctx, r);
      } catch (...) {
#pragma omp critical(srq_round_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  ProtocolRun run;
  run.result = summarize(config, records);
  run.records = std::move(records);
  return run;
}

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Ideal: return "ideal";
    case Backend::OpticsDevice: return "device";
    case Backend::Cavity: return "cavity";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Click: return "click";
    case Outcome::NoClick: return "no_click";
    case Outcome::Plus: return "plus";
    case Outcome::Minus: return "minus";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(ProtocolVerdict v) {
  switch (v) {
    case ProtocolVerdict::Secure: return "Secure";
    case ProtocolVerdict::EveDetected: return "EveDetected";
    case ProtocolVerdict::InsufficientData: return "InsufficientData";
  }
  return "?";
}

}  // namespace srq
