#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhd/fractional.hpp"
#include "qhd/harness/config.hpp"

namespace qhd::harness {

/// pass / fail are checked against `threshold`; info is report-only;
/// skipped means the diagnostic could not run (reason in `detail`).
struct DiagnosticResult {
  std::string name;
  std::string status;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct StripSummary {
  int k = 0;
  double t = 0.0;
  double energy_minus = 0.0;
  double energy_plus = 0.0;
  double jump = 0.0;
  double jump_bound = 0.0;
  double lambda_l2_minus = 0.0;
  double mass = 0.0;
};

struct RunManifest {
  nlohmann::json config;
  std::string config_hash;
  std::string code_version;
  /// complete, runtime_failure or io_failure
  std::string status = "complete";
  std::string failure;
  bool partial = false;
  std::vector<std::string> warnings;
  std::vector<StripSummary> strips;
  std::vector<DiagnosticResult> diagnostics;
  std::map<std::string, double> timings;

  bool diagnostics_pass() const;
  const DiagnosticResult* find(const std::string& name) const;
  /// Without timings the document is a deterministic function of the config.
  nlohmann::json to_json(bool with_timings = true) const;
};

struct ExperimentOptions {
  bool write_outputs = true;
  bool keep_trajectory = true;
};

struct ExperimentResult {
  RunManifest manifest;
  std::optional<Trajectory> trajectory;
  std::optional<LedgerReport> ledger;
  std::filesystem::path output_dir;

  ExitCode exit_code() const;
};

/// Runs the fractional-step construction for `config`, evaluates every enabled
/// diagnostic and (optionally) writes manifest.json, config.json,
/// timeseries.dat, boundaries.dat, ledger.dat, diagnostics.dat and field dumps.
/// Output-directory conflicts throw OutputError before any work is done.
ExperimentResult run_experiment(const RunConfig& config, const ExperimentOptions& options = {});

/// Diagnostics of a finished trajectory (used by run_experiment and verify).
std::vector<DiagnosticResult> evaluate_diagnostics(const RunConfig& config, const Trajectory& traj,
                                                   std::optional<LedgerReport>* ledger_out = nullptr);

std::string diagnostics_table(const std::vector<DiagnosticResult>& diagnostics);

}  // namespace qhd::harness
