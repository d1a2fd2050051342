#include "qhd/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qhd/harness/initial_conditions.hpp"
#include "qhd/harness/io.hpp"
#include "qhd/nls.hpp"
#include "qhd/norms.hpp"
#include "qhd/verification.hpp"

#ifndef QHD_VERSION_STRING
#define QHD_VERSION_STRING "unknown"
#endif

namespace qhd::harness {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

DiagnosticResult checked(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold ? "pass" : "fail", value, threshold, std::move(detail)};
}

DiagnosticResult info(std::string name, double value, std::string detail = {}) {
  return {std::move(name), "info", value, 0.0, std::move(detail)};
}

DiagnosticResult skipped(std::string name, std::string why) { return {std::move(name), "skipped", 0.0, 0.0, std::move(why)}; }

double relative_mass_drift(const Trajectory& traj) {
  if (traj.records.empty()) return 0.0;
  const double m0 = mass(traj.records.front().psi_minus);
  const double scale = m0 > 0.0 ? m0 : 1.0;
  double worst = 0.0;
  for (const StripDiagnostics& d : traj.strips) {
    for (double m : d.masses) worst = std::max(worst, std::abs(m - m0) / scale);
  }
  for (const StripRecord& r : traj.records) worst = std::max(worst, std::abs(mass(r.psi_plus) - m0) / scale);
  return worst;
}

double rho_continuity(const Trajectory& traj) {
  double worst = 0.0;
  for (const StripRecord& r : traj.records) {
    double max_rho = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < r.psi_minus.psi.size(); ++i) {
      const double a = std::norm(r.psi_minus.psi[i]);
      const double b = std::norm(r.psi_plus.psi[i]);
      max_rho = std::max(max_rho, a);
      diff = std::max(diff, std::abs(a - b));
    }
    if (max_rho > 0.0) worst = std::max(worst, diff / max_rho);
  }
  return worst;
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

bool RunManifest::diagnostics_pass() const {
  for (const DiagnosticResult& d : diagnostics) {
    if (d.status == "fail") return false;
  }
  return true;
}

const DiagnosticResult* RunManifest::find(const std::string& name) const {
  for (const DiagnosticResult& d : diagnostics) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

nlohmann::json RunManifest::to_json(bool with_timings) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const StripSummary& s : strips) {
    rows.push_back({{"k", s.k},
                    {"t", s.t},
                    {"energy_minus", s.energy_minus},
                    {"energy_plus", s.energy_plus},
                    {"jump", s.jump},
                    {"jump_bound", s.jump_bound},
                    {"lambda_l2_minus", s.lambda_l2_minus},
                    {"mass", s.mass}});
  }
  nlohmann::json diags = nlohmann::json::array();
  for (const DiagnosticResult& d : diagnostics) {
    // JSON has no NaN/inf; keep them as strings.
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(number(v)); };
    diags.push_back({{"name", d.name}, {"status", d.status}, {"value", num(d.value)}, {"threshold", num(d.threshold)},
                     {"detail", d.detail}});
  }
  nlohmann::json j = {{"config", config},
                      {"config_hash", config_hash},
                      {"code_version", code_version},
                      {"status", status},
                      {"failure", failure},
                      {"partial", partial},
                      {"warnings", warnings},
                      {"poisson_closure", "jellium: -Laplacian V = rho - mean(rho) - (C - mean(C)), zero-mean V"},
                      {"pass", diagnostics_pass() && status == "complete"},
                      {"strips", rows},
                      {"diagnostics", diags}};
  if (with_timings) j["timings"] = timings;
  return j;
}

ExitCode ExperimentResult::exit_code() const {
  if (manifest.status != "complete") return ExitCode::runtime_failure;
  return manifest.diagnostics_pass() ? ExitCode::pass : ExitCode::diagnostic_failure;
}

std::vector<DiagnosticResult> evaluate_diagnostics(const RunConfig& config, const Trajectory& traj,
                                                   std::optional<LedgerReport>* ledger_out) {
  const DiagnosticsSpec& spec = config.diagnostics;
  std::vector<DiagnosticResult> out;
  out.push_back(checked("mass_drift", relative_mass_drift(traj), spec.mass_tolerance));
  out.push_back(checked("rho_continuity", rho_continuity(traj), spec.rho_continuity_tolerance));
  out.push_back(checked("energy_equivalence", energy_equivalence_error(traj), spec.energy_equivalence_tolerance));

  if (spec.ledger && !traj.strips.empty()) {
    const double tol = spec.ledger_tolerance * std::abs(traj.initial_energy);
    LedgerReport ledger = discrete_energy_ledger(traj, tol);
    double worst = -std::numeric_limits<double>::infinity();
    for (const LedgerRow& r : ledger.rows) {
      if (r.k == 0) continue;
      worst = std::max(worst, r.jump - r.jump_bound);
      if (std::isfinite(r.energy_next_minus)) worst = std::max(worst, r.energy_next_minus - r.cumulative_bound);
      worst = std::max(worst, r.energy_plus - r.cumulative_bound);
    }
    DiagnosticResult d = checked("energy_ledger", worst, tol,
                                 std::to_string(ledger.jump_violations) + " jump and " +
                                     std::to_string(ledger.cumulative_violations) + " cumulative violations");
    d.status = ledger.pass() ? "pass" : "fail";
    out.push_back(d);
    if (ledger_out) *ledger_out = std::move(ledger);
  } else {
    out.push_back(skipped("energy_ledger", spec.ledger ? "no strips" : "disabled"));
  }

  const Grid grid = config.grid();
  if (spec.residuals) {
    const TestFunction eta = spec.test_function.scalar(grid, traj.final_time);
    const TestFunction zeta = spec.test_function.vector(grid, traj.final_time);
    const WeakFormResidual c = continuity_residual(traj, eta);
    const WeakFormResidual m = momentum_residual(traj, zeta);
    out.push_back(info("continuity_residual", c.value, std::to_string(c.samples_used) + " samples"));
    out.push_back(info("momentum_residual", m.value, std::to_string(m.samples_used) + " samples"));
  } else {
    out.push_back(skipped("continuity_residual", "disabled"));
    out.push_back(skipped("momentum_residual", "disabled"));
  }

  auto pair_name = [](const Exponent& q, const Exponent& r) {
    return "strichartz(" + q.to_string() + "," + r.to_string() + ")";
  };
  if (!spec.monitors) {
    for (const auto& [q, r] : spec.strichartz_pairs) out.push_back(skipped(pair_name(q, r), "disabled"));
    out.push_back(skipped("local_smoothing", "disabled"));
  } else if (traj.snapshots != SnapshotPolicy::substeps) {
    for (const auto& [q, r] : spec.strichartz_pairs) {
      out.push_back(skipped(pair_name(q, r), "needs substep snapshots"));
    }
    out.push_back(skipped("local_smoothing", "needs substep snapshots"));
  } else {
    const auto reps = strichartz_monitor(traj, spec.strichartz_pairs);
    for (const NormReport& rep : reps) {
      std::string detail = rep.admissible ? "admissible" : "not admissible";
      if (!rep.warning.empty()) detail += "; " + rep.warning;
      out.push_back(info(pair_name(rep.q, rep.r), rep.value, detail));
    }
    out.push_back(info("local_smoothing", local_smoothing_norm(traj, spec.test_function.scalar(grid, traj.final_time))));
  }
  return out;
}

std::string diagnostics_table(const std::vector<DiagnosticResult>& diagnostics) {
  std::ostringstream os;
  os << "# name status value threshold\n";
  for (const DiagnosticResult& d : diagnostics) {
    os << d.name << ' ' << d.status << ' ' << number(d.value) << ' ' << number(d.threshold) << '\n';
  }
  return os.str();
}

ExperimentResult run_experiment(const RunConfig& config, const ExperimentOptions& options) {
  const auto start = Clock::now();
  ExperimentResult result;
  RunManifest& man = result.manifest;
  man.config = to_json(config);
  man.config_hash = config_hash(config);
  man.code_version = QHD_VERSION_STRING;
  man.warnings = config.warnings;
  result.output_dir = config.resolved_output_dir();
  if (options.write_outputs) prepare_output_dir(result.output_dir, config.overwrite);

  const Grid grid = config.grid();
  const PhysicsParams params = config.physics(grid);

  Trajectory traj;
  auto t0 = Clock::now();
  try {
    const InitialCondition ic = build_initial_condition(grid, config.initial, params);
    traj = run_fractional_step(ic.state, config.final_time, config.tau, config.dt, params, config.driver_options());
  } catch (const RunFailure& e) {
    traj = e.partial();
    man.status = "runtime_failure";
    man.failure = e.what();
    man.partial = true;
  } catch (const std::domain_error& e) {
    // Non-finite initial data.
    man.status = "runtime_failure";
    man.failure = std::string("initial state: ") + e.what();
    man.partial = true;
  } catch (const std::invalid_argument& e) {
    // Input validated above; anything left is a numerical failure.
    man.status = "runtime_failure";
    man.failure = e.what();
    man.partial = true;
  }
  man.timings["evolution"] = seconds_since(t0);

  for (const StripRecord& r : traj.records) {
    if (r.index == 0) continue;
    StripSummary s;
    s.k = r.index;
    s.t = r.psi_minus.t;
    s.energy_minus = r.energy_minus;
    s.energy_plus = r.energy_plus;
    s.jump = r.energy_plus - r.energy_minus;
    s.lambda_l2_minus = r.lambda_l2_minus;
    s.jump_bound = -0.5 * effective_damping(config.tau, params) * r.lambda_l2_minus;
    s.mass = mass(r.psi_minus);
    man.strips.push_back(s);
  }

  t0 = Clock::now();
  if (man.status == "complete") {
    man.diagnostics = evaluate_diagnostics(config, traj, &result.ledger);
  } else {
    man.diagnostics.push_back(skipped("all", "run failed: " + man.failure));
  }
  man.timings["diagnostics"] = seconds_since(t0);

  if (options.write_outputs) {
    const fs::path& dir = result.output_dir;
    const bool ow = config.overwrite;
    try {
      t0 = Clock::now();
      write_json_file(dir / "config.json", man.config, ow);
      write_text_file(dir / "timeseries.dat", timeseries_table(traj), ow);
      write_text_file(dir / "boundaries.dat", boundary_table(traj), ow);
      write_text_file(dir / "ledger.dat", ledger_table(result.ledger.value_or(LedgerReport{})), ow);
      write_text_file(dir / "diagnostics.dat", diagnostics_table(man.diagnostics), ow);
      if (config.dump_fields) {
        fs::create_directories(dir / "fields");
        for (const StripRecord& r : traj.records) {
          write_field_dump(dir / "fields" / ("psi_" + std::to_string(r.index) + "_minus.bin"), r.psi_minus, ow);
          write_field_dump(dir / "fields" / ("psi_" + std::to_string(r.index) + "_plus.bin"), r.psi_plus, ow);
        }
      }
      man.timings["output"] = seconds_since(t0);
      man.timings["total"] = seconds_since(start);
      write_json_file(dir / "manifest.json", man.to_json(), ow);
    } catch (const std::exception& e) {
      man.status = "io_failure";
      man.failure = e.what();
      man.partial = true;
      try {
        write_json_file(dir / "manifest.json", man.to_json(), true);
      } catch (const std::exception&) {
        // The manifest itself could not be written; the caller still gets it.
      }
    }
  } else {
    man.timings["total"] = seconds_since(start);
  }

  if (options.keep_trajectory) result.trajectory = std::move(traj);
  return result;
}

}  // namespace qhd::harness
