#pragma once

// JSON configuration and run manifests.
//
// A config file looks like
//
//   {
//     "schema_version": 1,
//     "alpha": 0.5, "beta": 0.8660254037844386,
//     "rounds": 100000, "seed": 42, "run_index": 0, "eta": 1.0,
//     "backend": "ideal" | "device" | "cavity",
//     "projector_convention": "operational" | "literal",
//     "bell_sample_fraction": 1.0, "key_sacrifice_fraction": 0.1,
//     "detection_sigma": 4.0, "min_cell_samples": 10,
//     "eve": {"targets": "none" | "arm_A" | "arm_B" | "both",
//             "atoms": [{"weight": 1.0, "eA": [c0, c1], "eB": [c0, c1]}]}
//   }
//
// where each coefficient is a number or a [re, im] pair. Every field except
// schema_version is optional. A manifest wraps a config as
//   {"schema_version": 1, "tool_version": "...", "command": "...", "config": {...}}
// and is accepted wherever a config is.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srq/protocol.hpp"

namespace srq {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

using Json = nlohmann::ordered_json;

ProtocolConfig protocol_config_from_json(const nlohmann::json& j);
Json to_json(const ProtocolConfig& config);
Json to_json(const EveStrategy& eve);
Json to_json(const SuperpositionCoeffs& u);

ProtocolConfig load_config_file(const std::filesystem::path& path);

Json make_manifest(const std::string& command, const ProtocolConfig& config, Json extra = {});

Backend parse_backend(const std::string& s);
ProjectorConvention parse_convention(const std::string& s);
EveTargets parse_targets(const std::string& s);

}  // namespace srq
