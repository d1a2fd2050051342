#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhd/nls.hpp"
#include "qhd/physics.hpp"
#include "qhd/polar.hpp"

namespace qhd {

/// State at a strip boundary k*tau, before (minus) and after (plus) the
/// collision update. Record 0 holds the initial data twice.
struct StripRecord {
  int index = 0;
  WaveState psi_minus;
  WaveState psi_plus;
  HydroFields hydro_minus;
  HydroFields hydro_plus;
  double energy_minus = 0.0;
  double energy_plus = 0.0;
  double lambda_l2_minus = 0.0;  ///< ||Lambda(k tau-)||^2
  double lambda_l2_plus = 0.0;
  double branch_cut = 0.0;
  double cut_proximity = 0.0;
};

enum class SampleKind { boundary_minus, boundary_plus, interior };

/// A stored wave function used by residual quadrature and norm monitors.
/// `strip` is the strip whose closed interval contains t: boundary_minus at
/// k*tau belongs to strip k-1, boundary_plus to strip k.
struct Sample {
  double t = 0.0;
  int strip = 0;
  SampleKind kind = SampleKind::interior;
  WaveState state;
};

enum class SnapshotPolicy {
  boundaries,  ///< only k*tau- and k*tau+
  substeps,    ///< boundaries plus every `snapshot_stride` substeps
};

struct DriverOptions {
  SnapshotPolicy snapshots = SnapshotPolicy::boundaries;
  std::size_t snapshot_stride = 1;
  BranchPolicy branch = BranchPolicy::adaptive;
  std::optional<double> delta_vac;
  bool sample_energy = true;
  /// 2/3-rule filter in the kinetic step.
  bool dealias = false;
};

struct Trajectory {
  PhysicsParams params;
  double tau = 0.0;
  double dt = 0.0;
  double final_time = 0.0;
  double initial_energy = 0.0;
  SnapshotPolicy snapshots = SnapshotPolicy::boundaries;
  std::vector<StripRecord> records;
  std::vector<Sample> samples;
  /// One entry per evolved strip: substep masses and energies.
  std::vector<StripDiagnostics> strips;

  std::size_t strip_count() const noexcept { return strips.size(); }
};

/// Raised by run_fractional_step; carries everything computed before the failure.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

/// Damping factor applied at a boundary: collision_rate * tau.
double effective_damping(double tau, const PhysicsParams& params);

/// Collision update at a strip boundary: phase damping with factor
/// collision_rate * tau. Identity when that factor is 0; throws
/// std::invalid_argument when it is >= 1.
WaveState collision_update(const WaveState& state, double tau, const PhysicsParams& params,
                           BranchPolicy branch = BranchPolicy::fixed, std::optional<double> delta_vac = std::nullopt);

/// Alternates evolve_strip and collision_update for ceil(T/tau) strips.
Trajectory run_fractional_step(const WaveState& psi0, double final_time, double tau, double dt,
                               const PhysicsParams& params, const DriverOptions& options = {});

/// Squared L2 norm of Lambda.
double lambda_l2_squared(const HydroFields& h);

struct LedgerRow {
  int k = 0;
  double jump = 0.0;            ///< E(k tau+) - E(k tau-)
  double jump_bound = 0.0;      ///< -(s/2) ||Lambda(k tau-)||^2
  double lambda_l2_minus = 0.0;
  bool jump_ok = true;
  double energy_plus = 0.0;     ///< E(k tau+)
  double energy_next_minus = 0.0;  ///< E((k+1) tau-), NaN after the last strip
  double cumulative_bound = 0.0;   ///< -(s/2) sum_{j<=k} ||Lambda(j tau-)||^2 + (1 + tau) E0
  bool cumulative_ok = true;
  double remainder_norm = 0.0;  ///< exact update: always 0
};

struct LedgerReport {
  double tolerance = 0.0;
  double damping = 0.0;  ///< s = collision_rate * tau
  std::vector<LedgerRow> rows;
  std::size_t jump_violations = 0;
  std::size_t cumulative_violations = 0;

  bool pass() const noexcept { return jump_violations == 0 && cumulative_violations == 0; }
};

/// Checks every jump against -(s/2)||Lambda(k tau-)||^2 + tolerance and the
/// cumulative dissipation bound at both ends of every strip.
LedgerReport discrete_energy_ledger(const Trajectory& traj, double tolerance);

}  // namespace qhd
