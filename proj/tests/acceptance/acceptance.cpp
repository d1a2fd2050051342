// Acceptance checks. Prints one PASS/FAIL line per criterion, followed by
// indented detail lines. Usage: qhd_acceptance [--criterion N]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qhd/fractional.hpp"
#include "qhd/harness/studies.hpp"
#include "qhd/norms.hpp"
#include "qhd/polar.hpp"
#include "qhd/spectral.hpp"
#include "qhd/verification.hpp"

using namespace qhd;
using harness::fitted_order;
using harness::parallel_for;
using oracle::kPi;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Centered Gaussian with width sigma, sampled on every axis.
WaveState gaussian(const Grid& g, double sigma) {
  WaveState s{ComplexField(g), 0.0, 1.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unravel(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double x = g.coordinate(a, idx[static_cast<std::size_t>(a)]) - 0.5 * g.box_length(a);
      r2 += x * x;
    }
    s.psi[i] = std::exp(-r2 / (2 * sigma * sigma));
  }
  return s;
}

PhysicsParams cubic(double alpha) {
  PhysicsParams pp;
  pp.p = 3;
  pp.alpha = alpha;
  return pp;
}

const std::vector<double> kTaus = {0.1, 0.05, 0.025};

// Gaussian-packet runs shared by the ledger, conservation and energy checks.
std::vector<Trajectory> ledger_runs() {
  const Grid g = make_grid(1, 512, 20.0);
  const WaveState s = gaussian(g, 20.0 / 16);
  std::vector<Trajectory> out;
  for (double tau : kTaus) out.push_back(run_fractional_step(s, 1.0, tau, tau / 16, cubic(1.0), {}));
  return out;
}

struct ConsistencySetup {
  WaveState initial;
  TestFunction eta;
  TestFunction zeta;
};

ConsistencySetup consistency_setup() {
  const double L = 20.0;
  const Grid g = make_grid(1, 256, L);
  const TestFunction eta = TestFunction::bump(0.5, 0.35, {0.5 * L + 0.5, 0, 0}, {4.0, 1, 1});
  return {gaussian(g, L / 16), eta, eta.with_direction({1, 0, 0})};
}

std::vector<Trajectory> consistency_runs(double alpha) {
  const ConsistencySetup c = consistency_setup();
  std::vector<Trajectory> out(kTaus.size());
  parallel_for(kTaus.size(), 3, [&](std::size_t k) {
    DriverOptions o;
    o.snapshots = SnapshotPolicy::substeps;
    o.sample_energy = false;
    out[k] = run_fractional_step(c.initial, 1.0, kTaus[k], kTaus[k] / 64, cubic(alpha), o);
  });
  return out;
}

const double kMonitorLength = 4 * kPi;

TestFunction monitor_window() {
  const double c = 0.5 * kMonitorLength;
  const double r = kMonitorLength / 3;
  return TestFunction::bump(0.25, 0.3, {c, c, c}, {r, r, r});
}

std::vector<Trajectory> monitor_runs() {
  const Grid g = make_grid(3, 32, kMonitorLength);
  const WaveState s = gaussian(g, kMonitorLength / 12);
  std::vector<Trajectory> out(kTaus.size());
  parallel_for(kTaus.size(), 3, [&](std::size_t k) {
    DriverOptions o;
    o.snapshots = SnapshotPolicy::substeps;
    out[k] = run_fractional_step(s, 0.5, kTaus[k], kTaus[k] / 8, cubic(1.0), o);
  });
  return out;
}

struct ConstantModulus {
  double amplitude = 0.7;
  double phase = 2.0;
  double tau = 0.1;
  PhysicsParams params = cubic(1.0);
};

Trajectory constant_modulus_run(const ConstantModulus& c) {
  const Grid g = make_grid(1, 64, 2 * kPi);
  const WaveState s{ComplexField(g, std::polar(c.amplitude, c.phase)), 0.0, 1.0};
  DriverOptions o;
  o.branch = BranchPolicy::fixed;
  return run_fractional_step(s, 1.0, c.tau, c.tau / 16, c.params, o);
}

double relative_change(double a, double b) { return std::abs(b - a) / std::abs(a); }

// 1. Polar identities.
Outcome polar_identities() {
  Outcome out;
  Stopwatch clock;
  std::mt19937_64 rng(2024);
  const double L = 2.0;
  const int fields = 50;
  for (int dim : {1, 2}) {
    const std::size_t n = dim == 1 ? 256 : 64;
    const Grid g = make_grid(dim, n, L);
    const int bandwidth = dim == 1 ? 4 : 3;
    const std::vector<std::size_t> null_ladder = dim == 1 ? std::vector<std::size_t>{32, 64, 128}
                                                          : std::vector<std::size_t>{16, 32};
    const std::vector<std::size_t> rot_ladder = {8, 16};
    double worst_null = 0.0;
    double worst_rot = 0.0;
    double worst_null_ratio = 0.0;
    double worst_rot_ratio = 0.0;
    for (int f = 0; f < fields; ++f) {
      const auto poly = oracle::random_vacuum_free(rng, dim, L, bandwidth, 0.2);
      const WaveState s{poly.sample(g), 0.0, 1.0};
      worst_null = std::max(worst_null, null_form_residual(s));
      worst_rot = std::max(worst_rot, irrotationality_residual(hydrodynamic_fields(s)));

      auto ladder_ratio = [&](const std::vector<std::size_t>& ladder, bool rotation) {
        double prev = -1.0;
        double ratio = 0.0;
        for (std::size_t m : ladder) {
          const WaveState c{poly.sample(make_grid(dim, m, L)), 0.0, 1.0};
          const double r = rotation ? irrotationality_residual(hydrodynamic_fields(c)) : null_form_residual(c);
          if (prev > 0.0) ratio = std::max(ratio, r / prev);
          prev = r;
        }
        return ratio;
      };
      worst_null_ratio = std::max(worst_null_ratio, ladder_ratio(null_ladder, false));
      worst_rot_ratio = std::max(worst_rot_ratio, ladder_ratio(rot_ladder, true));
    }
    out.check(worst_null <= 1e-6, fmt("%dD N=%zu null form max %.2e <= 1e-6", dim, n, worst_null));
    out.check(worst_rot <= 1e-5, fmt("%dD N=%zu irrotationality max %.2e <= 1e-5", dim, n, worst_rot));
    out.check(worst_null_ratio <= 0.5, fmt("%dD null form refinement ratio max %.2e <= 0.5", dim, worst_null_ratio));
    out.check(worst_rot_ratio <= 0.5,
              fmt("%dD irrotationality refinement ratio max %.2e <= 0.5%s", dim, worst_rot_ratio,
                  dim == 1 ? " (identically zero in 1D)" : ""));
  }
  const double secs = clock.seconds();
  out.check(secs <= 30.0, fmt("runtime %.1f s <= 30 s", secs));
  return out;
}

// 2. Update law.
Outcome update_law() {
  Outcome out;
  std::mt19937_64 rng(7);
  const double L = 2 * kPi;
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, dim == 1 ? 256 : 64, L);
    // Modes carry at most half of |c0|: the phase stays within 30 degrees of
    // arg c0, so the winding is zero and the adaptive cut is never crossed.
    const auto poly = oracle::random_vacuum_free(rng, dim, L, 3, 0.5);
    const WaveState s{poly.sample(g), 0.0, 1.0};
    const HydroFields h = hydrodynamic_fields(s);
    const double m = max_abs(s.psi);
    for (double tau : {0.5, 0.1, 0.01}) {
      const WaveState u = phase_damping_update(s, tau, std::nullopt, BranchPolicy::adaptive);
      double modulus = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) modulus = std::max(modulus, std::abs(std::abs(u.psi[i]) - std::abs(s.psi[i])));
      const HydroFields hu = hydrodynamic_fields(u);
      double err = 0.0;
      double scale = 0.0;
      for (std::size_t a = 0; a < h.lambda.size(); ++a) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double expect = (1 - tau) * h.lambda[a][i];
          err += std::pow(hu.lambda[a][i] - expect, 2);
          scale += expect * expect;
        }
      }
      const double rel = std::sqrt(err / scale);
      out.check(modulus <= 1e-14 * m, fmt("%dD tau=%g modulus change %.2e <= 1e-14 max|psi|", dim, tau, modulus / m));
      out.check(rel <= 1e-6, fmt("%dD tau=%g Lambda relative error %.2e <= 1e-6", dim, tau, rel));
    }
  }
  return out;
}

// 3. Discrete energy inequality.
Outcome energy_inequality() {
  Outcome out;
  Stopwatch clock;
  const auto runs = ledger_runs();
  for (const auto& tr : runs) {
    const LedgerReport rep = discrete_energy_ledger(tr, 1e-8 * tr.initial_energy);
    double margin = -1e300;
    for (const auto& r : rep.rows) {
      if (r.k > 0) margin = std::max(margin, (r.jump - r.jump_bound) / tr.initial_energy);
    }
    out.check(rep.jump_violations == 0,
              fmt("tau=%g per-strip jumps: %zu violations, worst (jump - bound)/E0 = %.2e", tr.tau,
                  rep.jump_violations, margin));
    out.check(rep.cumulative_violations == 0,
              fmt("tau=%g cumulative bound: %zu violations", tr.tau, rep.cumulative_violations));
  }
  const double secs = clock.seconds();
  out.check(secs <= 120.0, fmt("runtime %.1f s <= 120 s", secs));
  return out;
}

double mass_drift(const Trajectory& tr) {
  const double m0 = tr.strips.front().masses.front();
  double worst = 0.0;
  for (const auto& s : tr.strips) {
    for (double m : s.masses) worst = std::max(worst, std::abs(m - m0) / m0);
  }
  for (const auto& r : tr.records) worst = std::max(worst, std::abs(mass(r.psi_plus) - m0) / m0);
  return worst;
}

// 4. Conservation.
Outcome conservation() {
  Outcome out;
  for (const auto& tr : ledger_runs()) {
    const double d = mass_drift(tr);
    out.check(d <= 1e-10, fmt("tau=%g mass drift %.2e <= 1e-10", tr.tau, d));
  }
  for (const auto& tr : monitor_runs()) {
    const double d = mass_drift(tr);
    out.check(d <= 1e-10, fmt("3D tau=%g mass drift %.2e <= 1e-10", tr.tau, d));
  }

  const Grid g = make_grid(1, 256, 20.0);
  WaveState s = gaussian(g, 20.0 / 16);
  for (std::size_t i = 0; i < g.size(); ++i) s.psi[i] *= std::polar(1.0, 2 * kPi / 20.0 * 3 * g.coordinate(0, i));
  const double strip = 0.4;
  std::vector<double> dts = {0.02, 0.01, 0.005};
  std::vector<double> drifts;
  for (double dt : dts) {
    const StripResult r = evolve_strip(s, strip, dt, cubic(1.0));
    const auto& e = r.diagnostics.energies;
    double worst = 0.0;
    for (double v : e) worst = std::max(worst, std::abs(v - e.front()));
    drifts.push_back(worst / std::abs(e.front()));
    out.note(fmt("dt=%g intra-strip energy drift %.3e", dt, drifts.back()));
  }
  const double order = fitted_order(dts, drifts);
  out.check(order >= 1.9, fmt("energy drift order %.3f >= 1.9", order));
  return out;
}

// 5. Energy equivalence over every run produced by the other criteria.
Outcome energy_equivalence() {
  Outcome out;
  auto record = [&](const std::string& family, const std::vector<Trajectory>& runs) {
    double worst = 0.0;
    std::size_t samples = 0;
    for (const auto& tr : runs) {
      worst = std::max(worst, energy_equivalence_error(tr));
      samples += tr.samples.size();
    }
    out.check(worst <= 1e-8, fmt("%s: %zu instants, max relative mismatch %.2e <= 1e-8", family.c_str(), samples, worst));
  };
  record("ledger runs", ledger_runs());
  record("consistency runs alpha=1", consistency_runs(1.0));
  record("consistency runs alpha=0", consistency_runs(0.0));
  record("3D monitor runs", monitor_runs());
  record("constant modulus run", {constant_modulus_run({})});
  return out;
}

// 6. Weak-form consistency.
Outcome weak_form_consistency() {
  Outcome out;
  const ConsistencySetup c = consistency_setup();
  const auto damped = consistency_runs(1.0);
  const auto control = consistency_runs(0.0);
  std::vector<double> cont;
  std::vector<double> mom;
  for (const auto& tr : damped) {
    cont.push_back(continuity_residual(tr, c.eta).value);
    mom.push_back(momentum_residual(tr, c.zeta).value);
    out.note(fmt("tau=%g continuity %.3e momentum %.3e", tr.tau, cont.back(), mom.back()));
  }
  const double cont_order = fitted_order(kTaus, cont);
  const double mom_order = fitted_order(kTaus, mom);
  out.check(cont_order >= 0.8 && cont_order <= 1.3, fmt("continuity order %.3f in [0.8, 1.3]", cont_order));
  out.check(mom_order >= 0.8 && mom_order <= 1.3, fmt("momentum order %.3f in [0.8, 1.3]", mom_order));

  const double cont0 = continuity_residual(control.front(), c.eta).value;
  const double mom0 = momentum_residual(control.front(), c.zeta).value;
  out.check(cont0 * 10 <= cont.front(),
            fmt("alpha=0 continuity %.3e at least 10x below %.3e (ratio %.2f)", cont0, cont.front(), cont.front() / cont0));
  out.check(mom0 * 10 <= mom.front(),
            fmt("alpha=0 momentum %.3e at least 10x below %.3e (ratio %.2f)", mom0, mom.front(), mom.front() / mom0));
  return out;
}

RealField periodic_density(std::size_t n, double beta, int mode) {
  const Grid g = make_grid(1, n, 2 * kPi);
  RealField rho(g);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::exp(beta * std::cos(mode * g.coordinate(0, i)));
  return rho;
}

// 7. Bohm-form equivalence.
Outcome bohm_equivalence() {
  Outcome out;
  const double plain = bohm_form_residual(periodic_density(256, 1.0, 1), 1.0);
  out.check(plain <= 1e-6, fmt("exp(cos x) N=256 residual %.2e <= 1e-6", plain));
  // exp(cos x) is already at the roundoff floor at N=256; the refinement check
  // uses a family that is still resolving there.
  const double coarse = bohm_form_residual(periodic_density(256, 0.5, 14), 1.0);
  const double fine = bohm_form_residual(periodic_density(512, 0.5, 14), 1.0);
  out.check(coarse <= 1e-6, fmt("exp(0.5 cos 14x) N=256 residual %.2e <= 1e-6", coarse));
  out.check(fine * 4 <= coarse, fmt("exp(0.5 cos 14x) N=512 residual %.2e, improvement %.1fx >= 4x", fine, coarse / fine));
  return out;
}

// 8. Oracles.
Outcome oracles() {
  Outcome out;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;

  for (int dim : {1, 2, 3}) {
    const Grid g = make_grid(dim, dim == 3 ? 8 : 16, 1.7);
    ComplexField f(g);
    for (auto& z : f) z = {nd(rng), nd(rng)};
    const SpectralField s = forward(f);
    const auto ref = oracle::dense_dft(g, std::vector<Complex>(f.begin(), f.end()));
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(s[i] - ref[i]));
      scale = std::max(scale, std::abs(ref[i]));
    }
    out.check(err / scale <= 1e-12, fmt("%dD forward transform vs direct DFT %.2e <= 1e-12", dim, err / scale));
    const ComplexField back = inverse(s);
    double rt = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rt = std::max(rt, std::abs(back[i] - f[i]));
    out.check(rt <= 1e-12, fmt("%dD inverse transform round trip %.2e <= 1e-12", dim, rt));
  }

  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, 16, 3.0);
    RealField rho(g);
    for (auto& v : rho) v = 1.0 + 0.3 * nd(rng);
    const RealField v = solve_poisson(rho);
    const auto ref = oracle::dense_poisson(g, std::vector<double>(rho.begin(), rho.end()));
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(v[i] - ref[i]));
      scale = std::max(scale, std::abs(ref[i]));
    }
    out.check(err / scale <= 1e-12, fmt("%dD N=16 Poisson vs dense solve %.2e <= 1e-12", dim, err / scale));
  }

  for (int dim : {1, 2}) {
    const double L = 2 * kPi;
    const Grid g = make_grid(dim, dim == 1 ? 256 : 128, L);
    const auto poly = oracle::random_vacuum_free(rng, dim, L, 3, 0.2);
    const RealField f = real_part(poly.sample(g));
    const RealVectorField grad = spectral_gradient(f);
    double err = 0.0;
    for (int a = 0; a < dim; ++a) {
      const auto fd = oracle::fd8(g, std::vector<double>(f.begin(), f.end()), a);
      for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(fd[i] - grad[static_cast<std::size_t>(a)][i]));
    }
    out.check(err <= 1e-6, fmt("%dD gradient vs 8th-order differences %.2e <= 1e-6", dim, err));
  }

  std::uniform_real_distribution<double> u(0.0, 2.0);
  const Grid g = make_grid(2, 8, 1.5);
  const std::vector<double> times = {0.0, 0.1, 0.25, 0.25, 0.4, 0.7};
  std::vector<TimedField> samples;
  for (std::size_t k = 0; k < times.size(); ++k) {
    RealField f(g);
    for (double& v : f) v = u(rng);
    samples.push_back({times[k], k < 3 ? 0 : 1, f});
  }
  const auto w = oracle::trapezoid_weights(times);
  double worst = 0.0;
  for (const auto& [qn, qd, rn, rd] : std::vector<std::array<int, 4>>{{2, 1, 6, 1}, {4, 1, 3, 1}, {7, 2, 9, 4}}) {
    const double q = static_cast<double>(qn) / qd;
    const double r = static_cast<double>(rn) / rd;
    double acc = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      double s = 0.0;
      for (double v : samples[k].magnitude) s += std::pow(v, r);
      acc += w[k] * std::pow(s * g.cell_volume(), q / r);
    }
    const double expect = std::pow(acc, 1.0 / q);
    const double got = mixed_norm(samples, Exponent::rational(qn, qd), Exponent::rational(rn, rd)).value;
    worst = std::max(worst, std::abs(got - expect) / expect);
  }
  out.check(worst <= 1e-10, fmt("mixed norms vs independent quadrature %.2e <= 1e-10", worst));
  return out;
}

// 9. Monitors bounded across tau-halving.
Outcome monitors() {
  Outcome out;
  Stopwatch clock;
  const auto runs = monitor_runs();
  const std::vector<std::pair<Exponent, Exponent>> pairs = {{Exponent::infinity(), Exponent::rational(2)},
                                                           {Exponent::rational(2), Exponent::rational(6)}};
  std::vector<std::vector<double>> values(3);
  for (const auto& tr : runs) {
    const auto reps = strichartz_monitor(tr, pairs);
    values[0].push_back(reps[0].value);
    values[1].push_back(reps[1].value);
    values[2].push_back(local_smoothing_norm(tr, monitor_window()));
    out.note(fmt("tau=%g strichartz(inf,2) %.5f strichartz(2,6) %.5f local smoothing %.5f", tr.tau, values[0].back(),
                 values[1].back(), values[2].back()));
  }
  const char* names[] = {"strichartz(inf,2)", "strichartz(2,6)", "local smoothing"};
  for (std::size_t m = 0; m < values.size(); ++m) {
    double worst = 0.0;
    for (std::size_t k = 1; k < values[m].size(); ++k) worst = std::max(worst, relative_change(values[m][k - 1], values[m][k]));
    out.check(worst <= 0.1, fmt("%s max change under tau-halving %.2f%% <= 10%%", names[m], 100 * worst));
  }
  const double secs = clock.seconds();
  out.check(secs <= 300.0, fmt("runtime %.1f s <= 300 s", secs));
  return out;
}

double wrap_phase(double theta) {
  theta = std::fmod(theta, 2 * kPi);
  return theta < 0 ? theta + 2 * kPi : theta;
}

// 10. Exact solutions.
Outcome exact_solutions() {
  Outcome out;
  const ConstantModulus c;
  const Trajectory tr = constant_modulus_run(c);
  const double rotation = std::pow(c.amplitude, c.params.p - 1) * c.tau / c.params.hbar;
  double theta = c.phase;
  double worst = 0.0;
  auto l2_error = [&](const WaveState& s, double phase) {
    ComplexField d = s.psi;
    for (auto& z : d) z -= std::polar(c.amplitude, phase);
    return l2_norm(d);
  };
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    const double minus = wrap_phase(theta - rotation);
    const double plus = (1 - c.params.alpha * c.tau) * minus;
    worst = std::max({worst, l2_error(tr.records[k].psi_minus, minus), l2_error(tr.records[k].psi_plus, plus)});
    theta = plus;
  }
  out.check(worst <= 1e-8, fmt("constant modulus phase over %zu strips, L2 error %.2e <= 1e-8", tr.records.size() - 1, worst));

  const double L = 2 * kPi;
  const Grid g = make_grid(1, 64, L);
  const double A = 0.8;
  const double k = 2 * kPi / L * 3;
  const double dt = 0.01;
  WaveState s{ComplexField(g), 0.0, 1.0};
  for (std::size_t i = 0; i < g.size(); ++i) s.psi[i] = std::polar(A, k * g.coordinate(0, i));
  const PhysicsParams pp = cubic(1.0);
  auto max_error = [&](const WaveState& got, double omega) {
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(got.psi[i] - std::polar(A, k * g.coordinate(0, i) - omega * dt)));
    return e;
  };
  const double kinetic = max_error(strang_step(s, dt, pp, SplitFlags{true, false}), 0.5 * k * k);
  out.check(kinetic <= 1e-12, fmt("plane wave kinetic step error %.2e <= 1e-12", kinetic));
  const double full = max_error(strang_step(s, dt, pp, SplitFlags{true, true}), 0.5 * k * k + std::pow(A, pp.p - 1));
  out.check(full <= 1e-12, fmt("plane wave full Strang step error %.2e <= 1e-12", full));
  return out;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {"polar identities", polar_identities},
    {"update law", update_law},
    {"discrete energy inequality", energy_inequality},
    {"conservation", conservation},
    {"energy equivalence", energy_equivalence},
    {"weak-form consistency", weak_form_consistency},
    {"Bohm-form equivalence", bohm_equivalence},
    {"oracles", oracles},
    {"monitors bounded", monitors},
    {"exact solutions", exact_solutions},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const int n = std::atoi(argv[++i]);
      if (n < 1 || n > static_cast<int>(kCriteria.size())) {
        std::fprintf(stderr, "criterion must be in 1..%zu\n", kCriteria.size());
        return 2;
      }
      selected.push_back(n);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty()) {
    for (std::size_t n = 1; n <= kCriteria.size(); ++n) selected.push_back(static_cast<int>(n));
  }

  bool all = true;
  for (int n : selected) {
    const Criterion& c = kCriteria[static_cast<std::size_t>(n - 1)];
    Outcome o;
    Stopwatch clock;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d %s: %s (%.1f s)\n", n, o.pass ? "PASS" : "FAIL", c.title, clock.seconds());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
