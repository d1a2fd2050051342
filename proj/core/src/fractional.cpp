#include "qhd/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qhd {

namespace {

StripRecord make_record(int k, const WaveState& minus, const WaveState& plus, const PhysicsParams& params,
                        std::optional<double> delta_vac) {
  StripRecord r;
  r.index = k;
  r.psi_minus = minus;
  r.psi_plus = plus;
  r.hydro_minus = hydrodynamic_fields(minus, delta_vac);
  r.hydro_plus = hydrodynamic_fields(plus, delta_vac);
  r.energy_minus = schrodinger_energy(minus, params).total();
  r.energy_plus = schrodinger_energy(plus, params).total();
  r.lambda_l2_minus = lambda_l2_squared(r.hydro_minus);
  r.lambda_l2_plus = lambda_l2_squared(r.hydro_plus);
  return r;
}

}  // namespace

double lambda_l2_squared(const HydroFields& h) {
  const double n = l2_norm(h.lambda);
  return n * n;
}

double effective_damping(double tau, const PhysicsParams& params) { return params.collision_rate() * tau; }

WaveState collision_update(const WaveState& state, double tau, const PhysicsParams& params, BranchPolicy branch,
                           std::optional<double> delta_vac) {
  const double s = effective_damping(tau, params);
  if (!(s >= 0.0)) throw std::invalid_argument("collision damping must be non-negative");
  if (s >= 1.0) throw std::invalid_argument("collision damping alpha*tau must be below 1");
  if (s == 0.0) return state;
  return phase_damping_update(state, s, delta_vac, branch);
}

Trajectory run_fractional_step(const WaveState& psi0, double final_time, double tau, double dt,
                               const PhysicsParams& params, const DriverOptions& options) {
  params.validate();
  if (!(final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!(tau > 0.0) || tau > final_time * (1.0 + 1e-12)) throw std::invalid_argument("tau must lie in (0, T]");
  const std::size_t substeps = substep_count(tau, dt);
  if (effective_damping(tau, params) >= 1.0) throw std::invalid_argument("collision damping alpha*tau must be below 1");
  if (psi0.hbar != params.hbar) throw std::invalid_argument("initial state hbar differs from physics hbar");

  const auto strips = static_cast<std::size_t>(std::ceil(final_time / tau - 1e-9));
  const std::size_t stride =
      options.snapshots == SnapshotPolicy::substeps ? std::max<std::size_t>(options.snapshot_stride, 1) : 0;

  Trajectory traj;
  traj.params = params;
  traj.tau = tau;
  traj.dt = tau / static_cast<double>(substeps);
  traj.final_time = static_cast<double>(strips) * tau;
  traj.snapshots = options.snapshots;

  WaveState current = psi0;
  current.t = 0.0;
  try {
    traj.records.push_back(make_record(0, current, current, params, options.delta_vac));
  } catch (const std::domain_error& e) {
    throw RunFailure(std::string("initial state: ") + e.what(), std::move(traj));
  }
  traj.initial_energy = traj.records.front().energy_minus;
  traj.samples.push_back({0.0, 0, SampleKind::boundary_plus, current});

  for (std::size_t k = 0; k < strips; ++k) {
    const int strip = static_cast<int>(k);
    const double t_start = static_cast<double>(k) * tau;
    current.t = t_start;
    try {
      StripResult res = evolve_strip(current, tau, traj.dt, params, stride, options.sample_energy,
                                     SplitFlags{true, true, options.dealias});
      traj.strips.push_back(std::move(res.diagnostics));
      for (auto& snap : res.snapshots) {
        const double t = snap.t;
        traj.samples.push_back({t, strip, SampleKind::interior, std::move(snap)});
      }
      WaveState minus = std::move(res.state);
      minus.t = t_start + tau;

      const PolarData polar = polar_factor(minus.psi, options.delta_vac);
      const double cut = options.branch == BranchPolicy::adaptive ? adaptive_branch_cut(minus.psi, polar.vacuum_mask) : 0.0;
      WaveState plus = collision_update(minus, tau, params, options.branch, options.delta_vac);

      StripRecord rec = make_record(strip + 1, minus, plus, params, options.delta_vac);
      rec.branch_cut = cut;
      rec.cut_proximity = cut_proximity_fraction(minus.psi, cut, 0.1, options.delta_vac);
      traj.records.push_back(std::move(rec));
      traj.samples.push_back({minus.t, strip, SampleKind::boundary_minus, minus});
      traj.samples.push_back({plus.t, strip + 1, SampleKind::boundary_plus, plus});
      current = std::move(plus);
    } catch (const StepFailure& e) {
      throw RunFailure(std::string("strip ") + std::to_string(k) + ": " + e.what(), std::move(traj));
    } catch (const std::domain_error& e) {
      throw RunFailure(std::string("strip ") + std::to_string(k) + ": " + e.what(), std::move(traj));
    }
  }
  return traj;
}

LedgerReport discrete_energy_ledger(const Trajectory& traj, double tolerance) {
  if (traj.records.size() < 2) throw std::invalid_argument("energy ledger needs at least one strip");
  LedgerReport report;
  report.tolerance = tolerance;
  report.damping = effective_damping(traj.tau, traj.params);
  const double e0 = traj.initial_energy;
  const double half = 0.5 * report.damping;

  double dissipated = 0.0;
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const StripRecord& rec = traj.records[k];
    LedgerRow row;
    row.k = rec.index;
    row.lambda_l2_minus = rec.lambda_l2_minus;
    row.energy_plus = rec.energy_plus;
    if (k > 0) {
      row.jump = rec.energy_plus - rec.energy_minus;
      row.jump_bound = -half * rec.lambda_l2_minus;
      row.jump_ok = row.jump <= row.jump_bound + tolerance;
      dissipated += half * rec.lambda_l2_minus;
      if (!row.jump_ok) ++report.jump_violations;
    }
    row.cumulative_bound = -dissipated + (1.0 + traj.tau) * e0;
    row.energy_next_minus = k + 1 < traj.records.size() ? traj.records[k + 1].energy_minus
                                                        : std::numeric_limits<double>::quiet_NaN();
    row.cumulative_ok = row.energy_plus <= row.cumulative_bound + tolerance;
    if (k + 1 < traj.records.size()) {
      row.cumulative_ok = row.cumulative_ok && row.energy_next_minus <= row.cumulative_bound + tolerance;
    }
    if (!row.cumulative_ok) ++report.cumulative_violations;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace qhd
