#pragma once

// Command implementations behind the `srq` CLI. Each command validates its
// inputs, renders every output in memory, then writes each file through a
// temporary name and renames it into place. Each command also writes
// `<command>.manifest.json`, which can be fed back through --config to replay
// the run byte for byte.

#include <cstdint>
#include <filesystem>
#include <string>

#include "srq/config.hpp"
#include "srq/protocol.hpp"

namespace srq {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitEveDetected = 2;
inline constexpr int kExitInsufficientData = 3;

struct CommandParams {
  std::size_t steps = 21;          // bell-sweep / device-stats alpha grid
  std::size_t points = 12;         // eve-scan family size
  std::string family = "default";  // eve-scan: default | random
  bool simulate = true;            // eve-scan Monte Carlo column
  std::uint64_t samples = 20000;   // device-stats Monte Carlo draws per row
};

Json to_json(const CommandParams& p);
// Overlays fields present in `j`; unknown fields raise ConfigError.
CommandParams command_params_from_json(const nlohmann::json& j, CommandParams base = {});

int exit_code(ProtocolVerdict v);

// 17 significant digits, '.' decimal point.
std::string format_double(double x);

void write_file_atomically(const std::filesystem::path& path, const std::string& content);

int cmd_bell_sweep(const std::filesystem::path& out_dir, const ProtocolConfig& config,
                   const CommandParams& params);
int cmd_run_protocol(const std::filesystem::path& out_dir, const ProtocolConfig& config);
int cmd_eve_scan(const std::filesystem::path& out_dir, const ProtocolConfig& config,
                 const CommandParams& params);
int cmd_device_stats(const std::filesystem::path& out_dir, const ProtocolConfig& config,
                     const CommandParams& params);
int cmd_cavity_demo(const std::filesystem::path& out_dir, const ProtocolConfig& config);

// Rendered outputs, exposed for tests.
std::string render_bell_sweep_csv(const ProtocolConfig& config, const CommandParams& params);
std::string render_transcript_jsonl(std::span<const RoundRecord> records);
Json render_summary(const ProtocolConfig& config, const ProtocolResult& result);
std::string render_eve_scan_csv(const ProtocolConfig& config, const CommandParams& params,
                                Json* summary = nullptr);
std::string render_device_stats_csv(const ProtocolConfig& config, const CommandParams& params);
Json render_cavity_demo(const ProtocolConfig& config);

}  // namespace srq
