#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qhd/harness/config.hpp"

namespace qhd::harness {

/// Runs job(0) ... job(count - 1) on up to `threads` workers. Exceptions are
/// rethrown (the first by index) after all jobs finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job);

/// Least-squares slope of log y against log x.
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

struct TauStudyRow {
  double tau = 0.0;
  double dt = 0.0;
  double continuity = 0.0;
  double momentum = 0.0;
  /// ||sqrt(rho^tau) - sqrt(rho^{next tau})||_{L2_t L2_x}; NaN for the last row.
  double cauchy_distance = 0.0;
  double ledger_worst = 0.0;
  bool ledger_pass = true;
};

struct TauStudyReport {
  std::vector<TauStudyRow> rows;
  double continuity_order = 0.0;
  double momentum_order = 0.0;
};

/// Runs `base` for every tau (keeping tau/dt fixed at the base ratio) and
/// tabulates the weak-form residuals, their fitted order in tau and the
/// Cauchy distances between consecutive runs. Needs >= 3 values in geometric
/// progression (ConfigError otherwise).
TauStudyReport tau_convergence_study(const RunConfig& base, const std::vector<double>& taus);

struct RelaxationRow {
  double epsilon = 0.0;
  /// Time average of ||J^eps||_{L2} over the strip boundaries.
  double mean_current = 0.0;
  /// ||rho^eps - rho^{next eps}||_{L2_t L2_x}; NaN for the last row.
  double cauchy_distance = 0.0;
};

struct RelaxationReport {
  std::vector<RelaxationRow> rows;
  /// Whether mean_current decreases as epsilon decreases (observation only).
  bool current_monotone = false;
};

/// Relaxation-time sweep: the collision rate becomes alpha / epsilon. Needs
/// >= 2 strictly decreasing values with epsilon > alpha * tau (ConfigError
/// otherwise).
RelaxationReport relaxation_sweep(const RunConfig& base, const std::vector<double>& epsilons);

std::string tau_study_table(const TauStudyReport& report);
std::string relaxation_table(const RelaxationReport& report);

}  // namespace qhd::harness
