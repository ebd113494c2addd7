#pragma once

// Key distribution over the single-photon entangled source.
//
// Each round the source emits (|1,0> - |0,1>)/sqrt(2), optionally intercepted
// by Eve. Alice picks P_A or P'_A, Bob picks P_B or P'_B, uniformly and
// independently. Rounds where both chose the number projector are anti-
// correlated and become key bits (Alice: click = 1; Bob records the inverse of
// his click). The remaining rounds, plus a sacrificed fraction of key rounds,
// feed the estimate of S; a deviation beyond `detection_sigma` standard errors
// from the no-eavesdropper value flags the channel.
//
// Randomness is drawn from per-round streams keyed by
// (seed, run_index, round, party), so rounds are independent work items and the
// transcript does not depend on how they are scheduled.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srq/bell.hpp"
#include "srq/device.hpp"
#include "srq/rng.hpp"

namespace srq {

enum class Backend { Ideal, OpticsDevice, Cavity };
enum class Outcome { Click, NoClick, Plus, Minus, Inconclusive };
enum class ProtocolVerdict { Secure, EveDetected, InsufficientData };
enum class Execution { Serial, Parallel };

struct ProtocolConfig {
  double alpha = 0.5;
  double beta = 0.86602540378443864676;
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 42;
  std::uint64_t run_index = 0;
  double eta = 1.0;
  EveStrategy eve;
  Backend backend = Backend::Ideal;
  // Fraction of non-key rounds handed to the S estimator.
  double bell_sample_fraction = 1.0;
  // Fraction of key rounds disclosed to estimate <P_A P_B>.
  double key_sacrifice_fraction = 0.1;
  ProjectorConvention convention = ProjectorConvention::Operational;
  double detection_sigma = 4.0;
  std::uint64_t min_cell_samples = 10;
  // Test hook: every round uses these settings instead of random choices.
  std::optional<std::pair<SettingKind, SettingKind>> forced_settings;
};

void validate(const ProtocolConfig& config);

struct RoundRecord {
  std::uint64_t round_id = 0;
  SettingKind alice_setting = SettingKind::Number;
  SettingKind bob_setting = SettingKind::Number;
  Outcome alice_outcome = Outcome::NoClick;
  Outcome bob_outcome = Outcome::NoClick;
  std::array<bool, 2> lost{false, false};
  bool key_round = false;
  bool bell_sample = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

// Estimator cells, in the order of the S combination.
enum Cell : std::size_t {
  kCellAPrime,
  kCellBPrime,
  kCellAPrimeBPrime,
  kCellAPrimeB,
  kCellABPrime,
  kCellAB,
  kCellCount
};

struct SEstimate {
  double s = 0.0;
  double standard_error = 0.0;
  BellTerms terms;
  std::array<std::uint64_t, kCellCount> samples{};
  std::array<std::uint64_t, kCellCount> hits{};
  bool sufficient = false;
};

// Superposition cells of the optics backend are rescaled by 2 per party
// because its Plus effect carries weight 1/2.
SEstimate estimate_s(std::span<const RoundRecord> records, Backend backend,
                     std::uint64_t min_cell_samples = 10);

struct ProtocolResult {
  std::string sifted_key_alice;
  std::string sifted_key_bob;
  std::uint64_t rounds = 0;
  std::uint64_t sifted_rounds = 0;
  std::uint64_t sacrificed_rounds = 0;
  double sift_fraction = 0.0;
  std::optional<double> key_disagreement_rate;
  double s_estimate = 0.0;
  double s_stderr = 0.0;
  double s_expected = 0.0;
  SEstimate estimate;
  ProtocolVerdict verdict = ProtocolVerdict::InsufficientData;
};

struct ProtocolRun {
  ProtocolResult result;
  std::vector<RoundRecord> records;
};

ProtocolRun run_protocol(const ProtocolConfig& config,
                         Execution execution = Execution::Parallel);

// Reference path: one thread, rounds in order.
inline ProtocolRun run_protocol_serial(const ProtocolConfig& config) {
  return run_protocol(config, Execution::Serial);
}

ProtocolResult summarize(const ProtocolConfig& config, std::span<const RoundRecord> records);

// Detector inefficiency: each photon is missed with probability 1 - eta.
Outcome apply_loss(Outcome outcome, double eta, SeededRng& rng);
DetectorCounts apply_loss(DetectorCounts counts, double eta, SeededRng& rng);
int thin_photons(int photons, double eta, SeededRng& rng);

const char* to_string(Backend b);
const char* to_string(Outcome o);
const char* to_string(ProtocolVerdict v);

}  // namespace srq
