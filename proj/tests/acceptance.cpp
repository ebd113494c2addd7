// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   acceptance [path/to/srq]
//
// With the CLI path given, the determinism check drives the real binary;
// otherwise it calls the command functions directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracle/dense_oracle.hpp"
#include "srq/bell.hpp"
#include "srq/cavity.hpp"
#include "srq/config.hpp"
#include "srq/device.hpp"
#include "srq/optics.hpp"
#include "srq/protocol.hpp"
#include "srq/report.hpp"
#include "srq/sweep.hpp"

using namespace srq;
namespace fs = std::filesystem;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const double kR3 = std::sqrt(3.0) / 2.0;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
  void near(double x, double y, double tol, const std::string& what) {
    if (!(std::abs(x - y) <= tol)) {
      ok = false;
      detail << " [" << what << ": " << x << " vs " << y << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

// Exit status of a shell command, -1 if it could not be run.
int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& title, const Check& c, double secs, double limit) {
  const bool in_time = limit <= 0 || secs < limit;
  const bool pass = c.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] criterion %d: %s (%.3f s%s)%s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              secs, limit > 0 ? (in_time ? ", within limit" : ", over limit") : "",
              c.detail.str().c_str());
  std::fflush(stdout);
}

SuperpositionCoeffs random_coeffs(std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  const Amplitude a{g(gen), g(gen)}, b{g(gen), g(gen)};
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

void criterion_1() {
  Check c;
  const auto t0 = Clock::now();
  const auto phi = make_source_state();
  const double secs = seconds_since(t0);
  c.near(phi.amplitude({1, 0}).real(), kH, 1e-12, "|10>");
  c.near(phi.amplitude({0, 1}).real(), -kH, 1e-12, "|01>");
  c.near(std::abs(phi.amplitude({1, 0}).imag()) + std::abs(phi.amplitude({0, 1}).imag()), 0, 1e-12,
         "imaginary parts");
  c.expect(phi.terms().size() == 2, "two terms");
  report(1, "source amplitudes (+1/sqrt2, -1/sqrt2)", c, secs, 1e-3);
}

void criterion_2() {
  Check c;
  const auto t0 = Clock::now();
  const auto one = StateVector::from_terms(1, 2, {{{0}, kH}, {{1}, kH}});
  // probe in mode 0 (sign-flip port), arm in mode 1
  const auto out = apply_beam_splitter(tensor(one, one), BeamSplitter{0.5, ModeIndex{0}, ModeIndex{1}});
  const double secs = seconds_since(t0);
  c.near(out.amplitude({0, 0}).real(), 0.5, 1e-12, "|00>");
  c.near(out.amplitude({1, 0}).real(), kH, 1e-12, "|10>");
  c.near(out.amplitude({2, 0}).real(), 0.5 * kH, 1e-12, "|20>");
  c.near(out.amplitude({0, 2}).real(), -0.5 * kH, 1e-12, "|02>");
  c.expect(out.amplitude({1, 1}) == Amplitude{0.0, 0.0}, "|11> exactly 0");
  // the device path builds the same output
  const auto dev = device_output(StateVector::from_terms(1, 2, {{{0}, kH}, {{1}, kH}}), ModeIndex{0},
                                 ProbeState{kH, kH});
  c.near(dev.amplitude({0, 1}).real(), kH, 1e-12, "device |D_a=1,D_b=0>");
  c.expect(dev.amplitude({1, 1}) == Amplitude{0.0, 0.0}, "device |11> exactly 0");
  report(2, "device splitter output (0.5, 1/sqrt2, 1/(2 sqrt2), -1/(2 sqrt2)), |11> = 0", c, secs, 0);
}

void criterion_3() {
  Check c;
  const auto t0 = Clock::now();
  const auto phi = make_source_state();
  const auto rho = oracle::pure(oracle::phi());
  const auto I = oracle::identity2();
  const auto N = oracle::number1();
  double worst = 0.0;
  for (int k = 1; k <= 99; ++k) {
    const double a = k / 100.0;
    const double b = std::sqrt(1.0 - a * a);
    const auto t = bell_terms(phi, a, b, ProjectorConvention::Operational);
    const auto o = oracle::operational(a, b);
    const double got[6] = {t.pA_prime, t.pB_prime, t.pA_prime_pB, t.pA_pB_prime, t.pA_pB, t.pA_prime_pB_prime};
    const double table[6] = {0.5, 0.5, b * b / 2, b * b / 2, 0.0, 2 * a * a * b * b};
    const double dense[6] = {oracle::expect(rho, oracle::kron(o.pa_prime, I)),
                             oracle::expect(rho, oracle::kron(I, o.pb_prime)),
                             oracle::expect(rho, oracle::kron(o.pa_prime, N)),
                             oracle::expect(rho, oracle::kron(N, o.pb_prime)),
                             oracle::expect(rho, oracle::kron(N, N)),
                             oracle::expect(rho, oracle::kron(o.pa_prime, o.pb_prime))};
    for (int i = 0; i < 6; ++i) {
      worst = std::max(worst, std::abs(got[i] - table[i]));
      worst = std::max(worst, std::abs(dense[i] - table[i]));
    }
  }
  const double secs = seconds_since(t0);
  c.near(worst, 0.0, 1e-12, "max deviation");
  c.detail << " max deviation " << worst;
  report(3, "expectation table over 99 (alpha, beta) points", c, secs, 1.0);
}

void criterion_4() {
  Check c;
  const auto t0 = Clock::now();
  const auto v = s_value(0.5, kR3);
  c.near(v.closed_form, -0.125, 1e-12, "closed form");
  c.near(v.oracle, -0.125, 1e-12, "oracle");
  c.expect(check_inequality(v.oracle) == Verdict::ViolatedBelow, "worked example verdict");
  int mismatched = 0;
  const auto rows = bell_sweep(alpha_grid(201), ProjectorConvention::Operational);
  for (const auto& r : rows) {
    const bool violated = std::abs(r.beta) > kH && r.alpha != 0.0;
    if ((r.verdict == Verdict::ViolatedBelow) != violated) ++mismatched;
    if (std::abs(r.s_oracle - r.s_closed_form) > 1e-12) ++mismatched;
  }
  c.expect(mismatched == 0, std::to_string(mismatched) + " grid rows disagree");
  report(4, "S(1/2, sqrt3/2) = -1/8; ViolatedBelow iff |beta| > 1/sqrt2 and alpha != 0", c,
         seconds_since(t0), 0);
}

void criterion_5() {
  Check c;
  const auto t0 = Clock::now();
  double worst = 0.0, peak = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double a = k / 100.0;
    const double b = std::sqrt(1.0 - a * a);
    const ProbeState probe{a, b};  // a*delta = b*gamma
    const auto arm = StateVector::from_terms(1, 2, {{{0}, a}, {{1}, b}});
    const auto dist = device_pattern_distribution(arm, ModeIndex{0}, probe);
    const double plus = dist.contains({1, 0}) ? dist.at({1, 0}) : 0.0;
    worst = std::max(worst, std::abs(plus - 2.0 * std::norm(b * probe.g0)));
    peak = std::max(peak, plus);
    c.expect(plus <= 0.5 + 1e-12, "P(Plus) <= 1/2");
  }
  c.near(worst, 0.0, 1e-12, "2|beta gamma|^2");
  const auto arm = StateVector::from_terms(1, 2, {{{0}, kH}, {{1}, kH}});
  const auto at_half = device_pattern_distribution(arm, ModeIndex{0}, {kH, kH});
  c.near(at_half.at({1, 0}), 0.5, 1e-12, "equality at 1/sqrt2");

  const int n = 100000;
  for (double a : {kH, 0.5}) {
    const double b = std::sqrt(1.0 - a * a);
    const auto s = StateVector::from_terms(1, 2, {{{0}, a}, {{1}, b}});
    const double p = 2 * a * a * b * b;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      SeededRng rng(2024, 0, i, stream::kAlice);
      if (measure_device(s, ModeIndex{0}, {a, b}, rng).first.tag == DeviceTag::Plus) ++hits;
    }
    const double f = hits / double(n);
    const double sigma = std::sqrt(p * (1 - p) / n);
    c.expect(std::abs(f - p) <= 4 * sigma, "Monte Carlo at alpha=" + std::to_string(a));
    c.detail << " MC alpha=" << a << ": " << f << " vs " << p << " (" << std::abs(f - p) / sigma << " sigma)";
  }
  report(5, "device success 2|beta gamma|^2 <= 1/2; Monte Carlo at 1e5 samples", c,
         seconds_since(t0), 10.0);
}

void criterion_6() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(606);
  std::normal_distribution<double> g;
  double completeness = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto pc = random_coeffs(gen);
    const auto povm = device_povm({pc.c0, pc.c1});
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 2; ++k)
        completeness = std::max(completeness, std::abs(povm.plus[r][k] + povm.minus[r][k] +
                                                       povm.inconclusive[r][k] - (r == k ? 1.0 : 0.0)));
  }
  c.near(completeness, 0.0, 1e-12, "E+ + E- + E_inc = I");

  double worst = 1.0;
  int tested = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = normalize(StateVector::from_terms(2, 2,
                                                     {{{0, 0}, {g(gen), g(gen)}},
                                                      {{0, 1}, {g(gen), g(gen)}},
                                                      {{1, 0}, {g(gen), g(gen)}},
                                                      {{1, 1}, {g(gen), g(gen)}}}));
    const auto u = random_coeffs(gen);
    const auto expected = StateVector::from_terms(
        1, 2,
        {{{0}, std::conj(u.c0) * s.amplitude({0, 0}) + std::conj(u.c1) * s.amplitude({1, 0})},
         {{1}, std::conj(u.c0) * s.amplitude({0, 1}) + std::conj(u.c1) * s.amplitude({1, 1})}});
    if (expected.norm_squared() < 1e-9) continue;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      SeededRng rng(606, trial, r, stream::kAlice);
      const auto [out, rest] = measure_device(s, ModeIndex{0}, probe_for_direction(u), rng);
      if (out.tag != DeviceTag::Plus) continue;
      const auto b = StateVector::from_terms(
          1, 2, {{{0}, rest.amplitude({0, 0})}, {{1}, rest.amplitude({0, 1})}});
      worst = std::min(worst, fidelity(b, expected));
      ++tested;
      break;
    }
  }
  c.expect(tested >= 990, "Plus heralded on " + std::to_string(tested) + " inputs");
  c.expect(worst >= 1.0 - 1e-10, "collapse fidelity");
  c.detail << " completeness " << completeness << ", min fidelity " << worst << " over " << tested
           << " inputs";
  report(6, "POVM completeness and post-selected collapse", c, seconds_since(t0), 0);
}

void criterion_7() {
  Check c;
  const auto t0 = Clock::now();
  for (auto backend : {Backend::Ideal, Backend::OpticsDevice}) {
    ProtocolConfig cfg;
    cfg.rounds = 100000;
    cfg.backend = backend;
    const auto r = run_protocol(cfg).result;
    const double n = static_cast<double>(cfg.rounds);
    const double sift_sigma = std::sqrt(0.25 * 0.75 / n);
    const std::string tag = to_string(backend);
    c.expect(std::abs(r.sift_fraction - 0.25) <= 4 * sift_sigma, tag + " sift fraction");
    c.expect(r.sifted_key_alice == r.sifted_key_bob && !r.sifted_key_alice.empty(),
             tag + " key agreement");
    c.expect(std::abs(r.s_estimate + 0.125) <= 4 * r.s_stderr, tag + " S estimate");
    c.detail << " " << tag << ": sift " << r.sift_fraction << ", S " << r.s_estimate << " +/- "
             << r.s_stderr << ", key " << r.sifted_key_alice.size() << " bits agree="
             << (r.sifted_key_alice == r.sifted_key_bob ? "yes" : "no") << ";";
  }
  report(7, "protocol statistics at 1e5 rounds (ideal, device)", c, seconds_since(t0), 60.0);
}

void criterion_8() {
  Check c;
  const auto t0 = Clock::now();
  const auto eve = always_intercept(EveTargets::ArmA, {0.0, 1.0});
  const auto rho = oracle::intercept(oracle::pure(oracle::phi()), oracle::ket_bra({0.0, 1.0}), true);
  const double dense = oracle::s_of(rho, oracle::operational(0.5, kR3));
  c.near(dense, 1.0 / 16, 1e-12, "dense oracle");
  const double analytic = s_with_eve(eve, 0.5, kR3);
  c.near(analytic, dense, 1e-12, "analytic");

  ProtocolConfig cfg;
  cfg.rounds = 100000;
  cfg.eve = eve;
  const auto r = run_protocol(cfg).result;
  c.expect(std::abs(r.s_estimate - analytic) <= 4 * r.s_stderr, "Monte Carlo");
  c.expect(r.verdict == ProtocolVerdict::EveDetected, "verdict");

  const auto strategies = random_strategies(10000, 808);
  const auto values = s_with_eve_batch(strategies, 0.5, kR3, ProjectorConvention::Operational);
  double lo = 1e9, hi = -1e9;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.expect(lo >= -1e-9 && hi <= 1.0 + 1e-9, "LHV bound");
  c.detail << " S_E dense " << dense << ", MC " << r.s_estimate << " +/- " << r.s_stderr << ", verdict "
           << to_string(r.verdict) << "; 1e4 strategies span [" << lo << ", " << hi << "]";
  report(8, "intercept |1> on arm A: S_E = 1/16, detected; random strategies in [0, 1]", c,
         seconds_since(t0), 300.0);
}

void criterion_9() {
  Check c;
  const auto t0 = Clock::now();
  const auto atoms = jc_evolve_both(make_cavity_initial(make_source_state()), JCParams{});
  const double fid = fidelity(atoms.state, transfer_target().state);
  c.expect(fid >= 1.0 - 1e-10, "transfer fidelity");
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double a = k / 100.0;
    const double b = std::sqrt(1.0 - a * a);
    const auto x = atomic_bell_terms(atoms, a, b);
    const auto y = bell_terms(make_source_state(), a, b);
    const double d[6] = {x.pA_prime - y.pA_prime,       x.pB_prime - y.pB_prime,
                         x.pA_prime_pB_prime - y.pA_prime_pB_prime,
                         x.pA_prime_pB - y.pA_prime_pB, x.pA_pB_prime - y.pA_pB_prime,
                         x.pA_pB - y.pA_pB};
    for (double v : d) worst = std::max(worst, std::abs(v));
  }
  c.near(worst, 0.0, 1e-12, "atomic vs photonic terms");
  c.detail << " fidelity " << fid << ", max term deviation " << worst;
  report(9, "cavity transfer and atomic expectations", c, seconds_since(t0), 0);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Every file in `a` exists in `b` with the same bytes.
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    const auto other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      why = e.path().filename().string();
      return false;
    }
  }
  std::size_t other_files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++other_files;
  if (files != other_files || files == 0) {
    why = "file sets differ";
    return false;
  }
  return true;
}

void criterion_10(const char* cli) {
  Check c;
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "srq_acceptance";
  fs::remove_all(root);

  struct Command {
    std::string name;
    std::string manifest;
    std::string args;
    std::function<int(const fs::path&, const ProtocolConfig&, const CommandParams&)> run;
  };
  const std::vector<Command> commands = {
      {"bell-sweep", "bell_sweep.manifest.json", "--steps 41",
       [](auto& d, auto& cfg, auto& p) { return cmd_bell_sweep(d, cfg, p); }},
      {"run-protocol", "run_protocol.manifest.json", "--rounds 20000 --seed 5 --backend device --eta 0.9",
       [](auto& d, auto& cfg, auto&) { return cmd_run_protocol(d, cfg); }},
      {"eve-scan", "eve_scan.manifest.json", "--rounds 5000 --points 6",
       [](auto& d, auto& cfg, auto& p) { return cmd_eve_scan(d, cfg, p); }},
      {"device-stats", "device_stats.manifest.json", "--steps 11 --samples 2000",
       [](auto& d, auto& cfg, auto& p) { return cmd_device_stats(d, cfg, p); }},
      {"cavity-demo", "cavity_demo.manifest.json", "",
       [](auto& d, auto& cfg, auto&) { return cmd_cavity_demo(d, cfg); }},
  };

  for (const auto& cmd : commands) {
    const auto first = root / (cmd.name + "_first");
    const auto replay = root / (cmd.name + "_replay");
    const auto again = root / (cmd.name + "_again");
    if (cli) {
      const std::string base = std::string("\"") + cli + "\" " + cmd.name;
      const std::string m = " --config \"" + (first / cmd.manifest).string() + "\"";
      const int rc[3] = {shell(base + " --out \"" + first.string() + "\" " + cmd.args),
                         shell(base + " --out \"" + replay.string() + "\"" + m),
                         shell(base + " --out \"" + again.string() + "\"" + m)};
      for (int code : rc) c.expect(code == 0 || code == kExitEveDetected, cmd.name + " exit " + std::to_string(code));
    } else {
      ProtocolConfig cfg;
      cfg.rounds = 5000;
      CommandParams params;
      params.samples = 2000;
      cmd.run(first, cfg, params);
      const auto loaded = load_config_file(first / cmd.manifest);
      std::ifstream in(first / cmd.manifest);
      const auto manifest = nlohmann::json::parse(in);
      const auto p = command_params_from_json(manifest["parameters"]);
      cmd.run(replay, loaded, p);
      cmd.run(again, loaded, p);
    }
    std::string why;
    c.expect(fs::exists(first / cmd.manifest), cmd.name + " wrote no manifest");
    if (fs::exists(first) && fs::exists(replay) && fs::exists(again)) {
      c.expect(same_tree(first, replay, why), cmd.name + " replay differs: " + why);
      c.expect(same_tree(replay, again, why), cmd.name + " repeat differs: " + why);
    } else {
      c.expect(false, cmd.name + " produced no output");
    }
  }
  fs::remove_all(root);
  c.detail << (cli ? " via CLI" : " via library");
  report(10, "commands replayed from their manifest are byte-identical", c, seconds_since(t0), 0);
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(cli);
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
