#pragma once

// Subcommands behind the `qcav` executable. Each one loads a config, writes
// manifest.json into the output directory, then its own result files.
//
//   physics   -> physics_report.json
//   exact     -> exact_result.json
//   simulate  -> observables.csv, summary.json, final_snapshot.json
//   sweep     -> sweep.csv
//   enhance   -> enhancement_report.json
//
// Exit codes: 0 success, 2 config/validation error, 3 size-cap error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qcav/config.hpp"

namespace qcav {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSize = 3;

/// Reference values quoted for the cyclotron field (T) and frequency (Hz)
/// at r0 = 1e-10 m, and the relative tolerance used to call them reproduced.
inline constexpr double kQuotedCyclotronField = 0.3e5;
inline constexpr double kQuotedCyclotronFrequency = 3.0e8;
inline constexpr double kQuoteTolerance = 0.15;

struct CommandRequest {
  std::string command;
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
};

/// Loads, resolves, writes the manifest and runs. Errors go to `err` as one
/// line and select the exit code.
int run_command(const CommandRequest& request, std::ostream& err);

nlohmann::ordered_json physics_report(const Config& config);
nlohmann::ordered_json exact_report(const Config& config);

void cmd_physics(const Config& config, const std::filesystem::path& out_dir);
void cmd_exact(const Config& config, const std::filesystem::path& out_dir);
void cmd_simulate(const Config& config, const std::filesystem::path& out_dir);
void cmd_sweep(const Config& config, const std::filesystem::path& out_dir);
void cmd_enhance(const Config& config, const std::filesystem::path& out_dir);

}  // namespace qcav
