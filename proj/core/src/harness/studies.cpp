#include "qhd/harness/studies.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "qhd/harness/initial_conditions.hpp"
#include "qhd/polar.hpp"
#include "qhd/verification.hpp"

namespace qhd::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Boundary-time field samples of a run: t = 0 and every k tau-.
struct BoundarySeries {
  std::vector<double> t;
  std::vector<RealField> field;
};

template <class F>
BoundarySeries boundary_series(const Trajectory& traj, F extract) {
  BoundarySeries s;
  for (const StripRecord& r : traj.records) {
    s.t.push_back(r.psi_minus.t);
    s.field.push_back(extract(r));
  }
  return s;
}

// L2_t L2_x distance on the times of `coarse` that `fine` also holds.
double series_distance(const BoundarySeries& coarse, const BoundarySeries& fine) {
  std::vector<double> t;
  std::vector<double> d2;
  std::size_t j = 0;
  for (std::size_t i = 0; i < coarse.t.size(); ++i) {
    while (j < fine.t.size() && fine.t[j] < coarse.t[i] - 1e-9) ++j;
    if (j == fine.t.size() || std::abs(fine.t[j] - coarse.t[i]) > 1e-9) continue;
    RealField diff = coarse.field[i];
    for (std::size_t n = 0; n < diff.size(); ++n) diff[n] -= fine.field[j][n];
    const double l2 = l2_norm(diff);
    t.push_back(coarse.t[i]);
    d2.push_back(l2 * l2);
  }
  if (t.size() < 2) return kNaN;
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (d2[i] + d2[i - 1]);
  return std::sqrt(acc);
}

Trajectory run(const RunConfig& c) {
  const Grid g = c.grid();
  const PhysicsParams params = c.physics(g);
  const InitialCondition ic = build_initial_condition(g, c.initial, params);
  return run_fractional_step(ic.state, c.final_time, c.tau, c.dt, params, c.driver_options());
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("order fit needs at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TauStudyReport tau_convergence_study(const RunConfig& base, const std::vector<double>& taus) {
  if (taus.size() < 3) throw ConfigError(ConfigErrorCode::strip_length, "a tau study needs at least three values");
  const double ratio = taus[1] / taus[0];
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0)) throw ConfigError(ConfigErrorCode::strip_length, "tau values must be positive");
    if (i > 0 && std::abs(taus[i] / taus[i - 1] - ratio) > 1e-9 * ratio) {
      throw ConfigError(ConfigErrorCode::strip_length, "tau values must form a geometric progression");
    }
  }
  if (std::abs(ratio - 1.0) < 1e-12) throw ConfigError(ConfigErrorCode::strip_length, "tau values must differ");
  const double substeps = std::round(base.tau / base.dt);

  std::vector<RunConfig> configs;
  for (double tau : taus) {
    RunConfig c = base;
    c.tau = tau;
    c.dt = tau / substeps;
    c.warnings.clear();
    validate(c);
    configs.push_back(c);
  }

  TauStudyReport report;
  report.rows.resize(taus.size());
  std::vector<BoundarySeries> series(taus.size());
  parallel_for(taus.size(), base.threads, [&](std::size_t i) {
    const RunConfig& c = configs[i];
    const Trajectory traj = run(c);
    const Grid g = c.grid();
    TauStudyRow& row = report.rows[i];
    row.tau = c.tau;
    row.dt = c.dt;
    row.continuity = continuity_residual(traj, c.diagnostics.test_function.scalar(g, c.final_time)).value;
    row.momentum = momentum_residual(traj, c.diagnostics.test_function.vector(g, c.final_time)).value;
    const LedgerReport ledger = discrete_energy_ledger(traj, c.diagnostics.ledger_tolerance * std::abs(traj.initial_energy));
    row.ledger_pass = ledger.pass();
    double worst = -std::numeric_limits<double>::infinity();
    for (const LedgerRow& r : ledger.rows) {
      if (r.k > 0) worst = std::max(worst, r.jump - r.jump_bound);
    }
    row.ledger_worst = worst;
    series[i] = boundary_series(traj, [](const StripRecord& r) { return polar_factor(r.psi_minus.psi).sqrt_rho; });
  });
  for (std::size_t i = 0; i < taus.size(); ++i) {
    // The finer run holds every boundary time of the coarser one.
    report.rows[i].cauchy_distance = kNaN;
    if (i + 1 < taus.size()) {
      const bool i_coarse = taus[i] > taus[i + 1];
      report.rows[i].cauchy_distance =
          i_coarse ? series_distance(series[i], series[i + 1]) : series_distance(series[i + 1], series[i]);
    }
  }
  std::vector<double> c;
  std::vector<double> m;
  for (const TauStudyRow& r : report.rows) {
    c.push_back(r.continuity);
    m.push_back(r.momentum);
  }
  report.continuity_order = fitted_order(taus, c);
  report.momentum_order = fitted_order(taus, m);
  return report;
}

RelaxationReport relaxation_sweep(const RunConfig& base, const std::vector<double>& epsilons) {
  if (epsilons.size() < 2) throw ConfigError(ConfigErrorCode::epsilon, "a relaxation sweep needs at least two values");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > base.alpha * base.tau)) {
      throw ConfigError(ConfigErrorCode::epsilon, "every epsilon must exceed alpha * tau");
    }
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw ConfigError(ConfigErrorCode::epsilon, "epsilon values must be strictly decreasing");
    }
  }
  std::vector<RunConfig> configs;
  for (double eps : epsilons) {
    RunConfig c = base;
    c.epsilon = eps;
    c.warnings.clear();
    validate(c);
    configs.push_back(c);
  }
  RelaxationReport report;
  report.rows.resize(epsilons.size());
  std::vector<BoundarySeries> rho(epsilons.size());
  parallel_for(epsilons.size(), base.threads, [&](std::size_t i) {
    const Trajectory traj = run(configs[i]);
    RelaxationRow& row = report.rows[i];
    row.epsilon = epsilons[i];
    const BoundarySeries j = boundary_series(traj, [](const StripRecord& r) {
      const RealVectorField& cur = r.hydro_minus.current;
      RealField mag(r.psi_minus.grid());
      for (const RealField& comp : cur) {
        for (std::size_t n = 0; n < mag.size(); ++n) mag[n] += comp[n] * comp[n];
      }
      for (double& v : mag) v = std::sqrt(v);
      return mag;
    });
    double acc = 0.0;
    for (std::size_t k = 1; k < j.t.size(); ++k) {
      acc += 0.5 * (j.t[k] - j.t[k - 1]) * (l2_norm(j.field[k]) + l2_norm(j.field[k - 1]));
    }
    row.mean_current = j.t.size() > 1 ? acc / (j.t.back() - j.t.front()) : 0.0;
    rho[i] = boundary_series(traj, [](const StripRecord& r) { return r.hydro_minus.rho; });
  });
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    report.rows[i].cauchy_distance = i + 1 < epsilons.size() ? series_distance(rho[i], rho[i + 1]) : kNaN;
  }
  report.current_monotone = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (!(report.rows[i].mean_current < report.rows[i - 1].mean_current)) report.current_monotone = false;
  }
  return report;
}

std::string tau_study_table(const TauStudyReport& report) {
  std::ostringstream os;
  os << "# tau dt continuity momentum cauchy_distance ledger_worst ledger_pass\n";
  for (const TauStudyRow& r : report.rows) {
    os << number(r.tau) << ' ' << number(r.dt) << ' ' << number(r.continuity) << ' ' << number(r.momentum) << ' '
       << number(r.cauchy_distance) << ' ' << number(r.ledger_worst) << ' ' << (r.ledger_pass ? 1 : 0) << '\n';
  }
  os << "# continuity_order " << number(report.continuity_order) << "\n# momentum_order "
     << number(report.momentum_order) << '\n';
  return os.str();
}

std::string relaxation_table(const RelaxationReport& report) {
  std::ostringstream os;
  os << "# epsilon mean_current cauchy_distance\n";
  for (const RelaxationRow& r : report.rows) {
    os << number(r.epsilon) << ' ' << number(r.mean_current) << ' ' << number(r.cauchy_distance) << '\n';
  }
  os << "# current_monotone " << (report.current_monotone ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace qhd::harness
