#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qhd/fractional.hpp"

namespace qhd::harness {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Creates `dir`. An existing non-empty directory is an error unless `overwrite`.
void prepare_output_dir(const std::filesystem::path& dir, bool overwrite);

/// Writes `content` to `path`; refuses an existing file unless `overwrite`.
void write_text_file(const std::filesystem::path& path, const std::string& content, bool overwrite);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& value, bool overwrite);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Binary field dump: "QHDFIELD", u32 version, u32 dim, u64 points per axis,
/// f64 box length x3, f64 t, f64 hbar, u64 count, then count (re, im) pairs.
/// Every number is little-endian; doubles are IEEE-754 binary64.
void write_field_dump(const std::filesystem::path& path, const WaveState& state, bool overwrite);
WaveState read_field_dump(const std::filesystem::path& path);

/// Substep time series: t strip mass energy.
std::string timeseries_table(const Trajectory& traj);
/// One row per strip boundary: k t E- E+ ||Lambda-||^2 ||Lambda+||^2 mass- branch_cut cut_proximity.
std::string boundary_table(const Trajectory& traj);
/// One row per ledger entry.
std::string ledger_table(const LedgerReport& ledger);

}  // namespace qhd::harness
