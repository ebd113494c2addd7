#include "srq/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <spdlog/spdlog.h>

#include "srq/cavity.hpp"
#include "srq/device.hpp"
#include "srq/optics.hpp"
#include "srq/sweep.hpp"

namespace srq {

namespace fs = std::filesystem;

namespace {

std::string csv(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) line += ',';
    line += c;
    first = false;
  }
  line += '\n';
  return line;
}

std::string f(double x) { return format_double(x); }

Json terms_json(const BellTerms& t) {
  Json j;
  j["pA_prime"] = t.pA_prime;
  j["pB_prime"] = t.pB_prime;
  j["pA_prime_pB_prime"] = t.pA_prime_pB_prime;
  j["pA_prime_pB"] = t.pA_prime_pB;
  j["pA_pB_prime"] = t.pA_pB_prime;
  j["pA_pB"] = t.pA_pB;
  return j;
}

Json state_json(const StateVector& s) {
  Json arr = Json::array();
  for (const auto& [occ, amp] : s.terms()) {
    Json t;
    t["occupation"] = occ;
    t["re"] = amp.real();
    t["im"] = amp.imag();
    arr.push_back(std::move(t));
  }
  return arr;
}

void write_outputs(const fs::path& out_dir,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) write_file_atomically(out_dir / name, content);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const CommandParams& p) {
  Json j;
  j["steps"] = p.steps;
  j["points"] = p.points;
  j["family"] = p.family;
  j["simulate"] = p.simulate;
  j["samples"] = p.samples;
  return j;
}

CommandParams command_params_from_json(const nlohmann::json& j, CommandParams p) {
  std::vector<std::string> issues;
  if (!j.is_object()) throw ConfigError({"$.parameters: expected an object"});
  for (const auto& [key, v] : j.items()) {
    const std::string path = "$.parameters." + key;
    if (key == "steps" || key == "points" || key == "samples") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        issues.push_back(path + ": expected a non-negative integer");
        continue;
      }
      const auto n = v.get<std::uint64_t>();
      if (key == "steps") p.steps = n;
      if (key == "points") p.points = n;
      if (key == "samples") p.samples = n;
    } else if (key == "family") {
      if (!v.is_string() || (v != "default" && v != "random")) {
        issues.push_back(path + ": expected \"default\" or \"random\"");
        continue;
      }
      p.family = v.get<std::string>();
    } else if (key == "simulate") {
      if (!v.is_boolean()) {
        issues.push_back(path + ": expected a boolean");
        continue;
      }
      p.simulate = v.get<bool>();
    } else {
      issues.push_back(path + ": unknown field");
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return p;
}

int exit_code(ProtocolVerdict v) {
  switch (v) {
    case ProtocolVerdict::Secure: return kExitOk;
    case ProtocolVerdict::EveDetected: return kExitEveDetected;
    case ProtocolVerdict::InsufficientData: return kExitInsufficientData;
  }
  return kExitError;
}

void write_file_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

// ---- bell-sweep -----------------------------------------------------------

std::string render_bell_sweep_csv(const ProtocolConfig& config, const CommandParams& params) {
  const auto alphas = alpha_grid(params.steps);
  const auto rows = bell_sweep(alphas, config.convention);
  std::string out = csv({"alpha", "beta", "s_closed_form", "s_oracle", "verdict"});
  for (const auto& r : rows) {
    out += csv({f(r.alpha), f(r.beta), f(r.s_closed_form), f(r.s_oracle), to_string(r.verdict)});
  }
  return out;
}

int cmd_bell_sweep(const fs::path& out_dir, const ProtocolConfig& config,
                   const CommandParams& params) {
  auto body = render_bell_sweep_csv(config, params);
  Json p;
  p["steps"] = params.steps;
  write_outputs(out_dir, {{"bell_sweep.csv", body},
                          {"bell_sweep.manifest.json", dump(make_manifest("bell-sweep", config, p))}});
  spdlog::info("bell-sweep: {} rows written to {}", params.steps, out_dir.string());
  return kExitOk;
}

// ---- run-protocol ---------------------------------------------------------

std::string render_transcript_jsonl(std::span<const RoundRecord> records) {
  std::string out;
  out.reserve(records.size() * 200);
  for (const auto& r : records) {
    Json j;
    j["round"] = r.round_id;
    j["alice_setting"] = to_string(r.alice_setting);
    j["bob_setting"] = to_string(r.bob_setting);
    j["alice_outcome"] = to_string(r.alice_outcome);
    j["bob_outcome"] = to_string(r.bob_outcome);
    j["alice_lost"] = r.lost[0];
    j["bob_lost"] = r.lost[1];
    j["key_round"] = r.key_round;
    j["bell_sample"] = r.bell_sample;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Json render_summary(const ProtocolConfig& config, const ProtocolResult& res) {
  static constexpr const char* kCellNames[kCellCount] = {
      "pA_prime", "pB_prime", "pA_prime_pB_prime", "pA_prime_pB", "pA_pB_prime", "pA_pB"};
  Json j;
  j["verdict"] = to_string(res.verdict);
  j["exit_code"] = exit_code(res.verdict);
  j["backend"] = to_string(config.backend);
  j["rounds"] = res.rounds;
  j["sifted_rounds"] = res.sifted_rounds;
  j["sacrificed_rounds"] = res.sacrificed_rounds;
  j["sift_fraction"] = res.sift_fraction;
  j["key_length"] = res.sifted_key_alice.size();
  j["key_disagreement_rate"] =
      res.key_disagreement_rate ? Json(*res.key_disagreement_rate) : Json(nullptr);
  j["s_estimate"] = res.s_estimate;
  j["s_stderr"] = res.s_stderr;
  j["s_expected"] = res.s_expected;
  j["detection_sigma"] = config.detection_sigma;
  j["terms"] = terms_json(res.estimate.terms);
  Json cells;
  for (std::size_t c = 0; c < kCellCount; ++c) {
    Json cell;
    cell["samples"] = res.estimate.samples[c];
    cell["hits"] = res.estimate.hits[c];
    cells[kCellNames[c]] = std::move(cell);
  }
  j["cells"] = std::move(cells);
  j["sifted_key_alice"] = res.sifted_key_alice;
  j["sifted_key_bob"] = res.sifted_key_bob;
  return j;
}

int cmd_run_protocol(const fs::path& out_dir, const ProtocolConfig& config) {
  const auto run = run_protocol(config);
  const auto summary = render_summary(config, run.result);
  write_outputs(out_dir, {{"summary.json", dump(summary)},
                          {"transcript.jsonl", render_transcript_jsonl(run.records)},
                          {"run_protocol.manifest.json", dump(make_manifest("run-protocol", config))}});
  spdlog::info("run-protocol: S = {} +/- {} (expected {}), verdict {}", run.result.s_estimate,
               run.result.s_stderr, run.result.s_expected, to_string(run.result.verdict));
  return exit_code(run.result.verdict);
}

// ---- eve-scan -------------------------------------------------------------

std::string render_eve_scan_csv(const ProtocolConfig& config, const CommandParams& params,
                                Json* summary) {
  std::vector<NamedStrategy> family;
  if (params.family == "random") {
    family.push_back({"identity", no_eve()});
    auto strategies = random_strategies(params.points, config.seed);
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      family.push_back({"random_" + std::to_string(i), std::move(strategies[i])});
    }
  } else {
    family = default_eve_family(params.points);
  }
  const auto rows = eve_scan(family, config, params.simulate);

  std::string out = csv({"label", "targets", "atoms", "eA_c0_re", "eA_c0_im", "eA_c1_re",
                         "eA_c1_im", "eB_c0_re", "eB_c0_im", "eB_c1_re", "eB_c1_im",
                         "s_e_analytic", "s_e_simulated", "s_e_stderr", "detected"});
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& r : rows) {
    const auto& s = r.entry.strategy;
    const EveAtom first = s.atoms.empty() ? EveAtom{} : s.atoms.front();
    std::string detected = "";
    if (r.verdict) detected = *r.verdict == ProtocolVerdict::EveDetected ? "true" : "false";
    out += csv({r.entry.label, to_string(s.targets), std::to_string(s.atoms.size()),
                f(first.eA.c0.real()), f(first.eA.c0.imag()), f(first.eA.c1.real()),
                f(first.eA.c1.imag()), f(first.eB.c0.real()), f(first.eB.c0.imag()),
                f(first.eB.c1.real()), f(first.eB.c1.imag()), f(r.s_analytic),
                r.s_simulated ? f(*r.s_simulated) : "", r.s_stderr ? f(*r.s_stderr) : "",
                detected});
    if (s.targets != EveTargets::None) {
      lo = std::min(lo, r.s_analytic);
      hi = std::max(hi, r.s_analytic);
    }
  }
  if (summary) {
    Json j;
    j["rows"] = rows.size();
    j["s_quantum"] = s_closed_form(config.alpha, config.beta, config.convention);
    j["s_e_min_intercepted"] = std::isfinite(lo) ? Json(lo) : Json(nullptr);
    j["s_e_max_intercepted"] = std::isfinite(hi) ? Json(hi) : Json(nullptr);
    *summary = std::move(j);
  }
  return out;
}

int cmd_eve_scan(const fs::path& out_dir, const ProtocolConfig& config,
                 const CommandParams& params) {
  Json summary;
  auto body = render_eve_scan_csv(config, params, &summary);
  Json p;
  p["points"] = params.points;
  p["family"] = params.family;
  p["simulate"] = params.simulate;
  write_outputs(out_dir, {{"eve_scan.csv", body},
                          {"eve_scan_summary.json", dump(summary)},
                          {"eve_scan.manifest.json", dump(make_manifest("eve-scan", config, p))}});
  spdlog::info("eve-scan: intercepted S_E range [{}, {}]", summary["s_e_min_intercepted"].dump(),
               summary["s_e_max_intercepted"].dump());
  return kExitOk;
}

// ---- device-stats ---------------------------------------------------------

std::string render_device_stats_csv(const ProtocolConfig& config, const CommandParams& params) {
  const auto alphas = alpha_grid(params.steps);
  std::vector<std::string> lines(alphas.size());
  const auto n = static_cast<std::int64_t>(alphas.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const double alpha = alphas[i];
      const double beta = std::sqrt(1.0 - alpha * alpha);
      // Arm in alpha|0> + beta|1>; probe matched so that alpha delta = beta gamma.
      const ProbeState probe{alpha, beta};
      const auto arm = StateVector::from_terms(1, 2, {{{0}, alpha}, {{1}, beta}});
      const auto dist = device_pattern_distribution(arm, ModeIndex{0}, probe);
      auto p = [&](int a, int b) {
        auto it = dist.find({a, b});
        return it == dist.end() ? 0.0 : it->second;
      };
      const double p_plus = p(1, 0);
      const double p_minus = p(0, 1);
      const double p_inc = 1.0 - p_plus - p_minus;
      const auto povm = device_povm(probe);
      const SuperpositionCoeffs arm_u{alpha, beta};
      double dev = 0.0;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          const Amplitude sum = povm.plus[r][c] + povm.minus[r][c] + povm.inconclusive[r][c];
          dev = std::max(dev, std::abs(sum - (r == c ? 1.0 : 0.0)));
        }
      }
      std::uint64_t plus_hits = 0;
      for (std::uint64_t k = 0; k < params.samples; ++k) {
        SeededRng rng(config.seed, static_cast<std::uint64_t>(i), k, stream::kAlice);
        if (measure_device(arm, ModeIndex{0}, probe, rng).first.tag == DeviceTag::Plus) ++plus_hits;
      }
      const std::string mc =
          params.samples ? f(static_cast<double>(plus_hits) / static_cast<double>(params.samples)) : "";
      lines[i] = csv({f(alpha), f(beta), f(probe.g0.real()), f(probe.g1.real()), f(p_plus),
                      f(2.0 * std::norm(beta * probe.g0)), f(effect_probability(povm.plus, arm_u)),
                      mc, f(p_minus), f(p_inc), f(p(1, 1)), f(dev)});
    } catch (...) {
#pragma omp critical(srq_device_stats_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::string out = csv({"alpha", "beta", "probe_gamma", "probe_delta", "p_plus_fock",
                         "p_plus_formula", "p_plus_povm", "p_plus_mc", "p_minus", "p_inconclusive",
                         "p_11", "completeness_deviation"});
  for (const auto& l : lines) out += l;
  return out;
}

int cmd_device_stats(const fs::path& out_dir, const ProtocolConfig& config,
                     const CommandParams& params) {
  auto body = render_device_stats_csv(config, params);
  Json p;
  p["steps"] = params.steps;
  p["samples"] = params.samples;
  write_outputs(out_dir, {{"device_stats.csv", body},
                          {"device_stats.manifest.json", dump(make_manifest("device-stats", config, p))}});
  return kExitOk;
}

// ---- cavity-demo ----------------------------------------------------------

Json render_cavity_demo(const ProtocolConfig& config) {
  const JCParams params{std::numbers::pi / 2.0};
  const auto initial = make_cavity_initial(make_source_state());
  const auto transferred = jc_evolve_both(initial, params);
  const auto target = transfer_target();

  Json j;
  j["lambda_t"] = params.lambda_t;
  j["initial_state"] = state_json(initial.state);
  j["transferred_state"] = state_json(transferred.state);
  j["target_state"] = state_json(target.state);
  j["fidelity"] = fidelity(transferred.state, target.state);

  const auto photonic = bell_terms(make_source_state(), config.alpha, config.beta, config.convention);
  const auto atomic = atomic_bell_terms(transferred, config.alpha, config.beta, config.convention);
  j["photonic_terms"] = terms_json(photonic);
  j["atomic_terms"] = terms_json(atomic);
  const double dev = std::max({std::abs(photonic.pA_prime - atomic.pA_prime),
                               std::abs(photonic.pB_prime - atomic.pB_prime),
                               std::abs(photonic.pA_prime_pB_prime - atomic.pA_prime_pB_prime),
                               std::abs(photonic.pA_prime_pB - atomic.pA_prime_pB),
                               std::abs(photonic.pA_pB_prime - atomic.pA_pB_prime),
                               std::abs(photonic.pA_pB - atomic.pA_pB)});
  j["max_term_deviation"] = dev;
  j["s_photonic"] = combine(photonic);
  j["s_atomic"] = combine(atomic);

  const SuperpositionCoeffs u{config.alpha, config.beta};
  const auto rotated = ramsey_rotation(AtomState{u.c0, u.c1}, u);
  j["ramsey_excited_population"] = std::norm(rotated.ce);
  return j;
}

int cmd_cavity_demo(const fs::path& out_dir, const ProtocolConfig& config) {
  const auto demo = render_cavity_demo(config);
  write_outputs(out_dir, {{"cavity_demo.json", dump(demo)},
                          {"cavity_demo.manifest.json", dump(make_manifest("cavity-demo", config))}});
  spdlog::info("cavity-demo: transfer fidelity {}", demo["fidelity"].get<double>());
  return kExitOk;
}

}  // namespace srq
