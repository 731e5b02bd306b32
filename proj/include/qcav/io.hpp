#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcav/ising.hpp"
#include "qcav/sweep.hpp"

namespace qcav {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Writes bytes verbatim (no newline translation).
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// `sweep,E_red,M,field_term` plus one line per record.
std::string observables_csv(std::span<const ObservableRecord> records);

inline constexpr std::string_view kSweepCsvHeader =
    "L,K,T_red,b,seed,mean_E,stderr_E,mean_absM,stderr_absM,binder_U,ln_enhancement,"
    "stderr_ln_enhancement";

/// Sweep rows in grid order. Missing values (no error estimate, undefined
/// Binder cumulant) are written as `nan`.
std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace qcav
