#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qhd/fractional.hpp"

using namespace qhd;

namespace {

constexpr double kPi = std::numbers::pi;

WaveState gaussian(std::size_t n = 256, double L = 20.0, double k0 = 0.0) {
  const Grid g = make_grid(1, n, L);
  WaveState s{ComplexField(g), 0.0, 1.0};
  const double sigma = L / 16;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.coordinate(0, i) - L / 2;
    s.psi[i] = std::exp(-x * x / (2 * sigma * sigma)) * std::polar(1.0, k0 * x);
  }
  return s;
}

double wrap_2pi(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

}  // namespace

TEST(Fractional, CollisionUpdateRules) {
  const WaveState s = gaussian(64);
  PhysicsParams params;
  params.alpha = 0.0;
  const WaveState same = collision_update(s, 0.1, params);
  for (std::size_t i = 0; i < s.psi.size(); ++i) EXPECT_EQ(same.psi[i], s.psi[i]);
  params.alpha = 10.0;
  EXPECT_THROW(collision_update(s, 0.1, params), std::invalid_argument);
  params.alpha = 1.0;
  params.epsilon_relax = 0.5;
  EXPECT_DOUBLE_EQ(effective_damping(0.1, params), 0.2);
}

TEST(Fractional, RunStructure) {
  PhysicsParams params;
  params.p = 3.0;
  DriverOptions opts;
  opts.snapshots = SnapshotPolicy::substeps;
  opts.snapshot_stride = 2;
  const Trajectory tr = run_fractional_step(gaussian(64), 1.0, 0.3, 0.05, params, opts);
  EXPECT_EQ(tr.strip_count(), 4u);
  EXPECT_NEAR(tr.final_time, 1.2, 1e-12);
  ASSERT_EQ(tr.records.size(), 5u);
  EXPECT_EQ(tr.records[0].psi_minus.psi[3], tr.records[0].psi_plus.psi[3]);
  EXPECT_DOUBLE_EQ(tr.initial_energy, tr.records[0].energy_minus);
  // 1 initial + per strip: 2 interior (substeps 2, 4 of 6) + minus + plus.
  EXPECT_EQ(tr.samples.size(), 1u + 4u * 4u);
  for (std::size_t i = 1; i < tr.samples.size(); ++i) EXPECT_GE(tr.samples[i].t, tr.samples[i - 1].t - 1e-12);
  EXPECT_EQ(tr.samples[0].kind, SampleKind::boundary_plus);
  const Sample& minus = tr.samples[3];
  const Sample& plus = tr.samples[4];
  EXPECT_EQ(minus.kind, SampleKind::boundary_minus);
  EXPECT_EQ(plus.kind, SampleKind::boundary_plus);
  EXPECT_EQ(minus.strip, 0);
  EXPECT_EQ(plus.strip, 1);
  EXPECT_DOUBLE_EQ(minus.t, plus.t);
  EXPECT_EQ(tr.records[1].index, 1);
  EXPECT_DOUBLE_EQ(tr.records[4].psi_plus.t, tr.final_time);
}

TEST(Fractional, RunValidation) {
  PhysicsParams params;
  const WaveState s = gaussian(64);
  EXPECT_THROW(run_fractional_step(s, 1.0, 2.0, 0.1, params), std::invalid_argument);
  EXPECT_THROW(run_fractional_step(s, 1.0, 0.1, 0.03, params), std::invalid_argument);
  EXPECT_THROW(run_fractional_step(s, -1.0, 0.1, 0.01, params), std::invalid_argument);
  params.alpha = 20.0;
  EXPECT_THROW(run_fractional_step(s, 1.0, 0.1, 0.01, params), std::invalid_argument);
  params.alpha = 1.0;
  params.hbar = 2.0;
  EXPECT_THROW(run_fractional_step(s, 1.0, 0.1, 0.01, params), std::invalid_argument);
}

TEST(Fractional, RunFailureKeepsPartialTrajectory) {
  PhysicsParams params;
  params.p = 4.0;
  WaveState s = gaussian(64);
  for (auto& z : s.psi) z *= 1e200;
  try {
    run_fractional_step(s, 1.0, 0.1, 0.01, params);
    FAIL() << "expected RunFailure";
  } catch (const RunFailure& e) {
    EXPECT_TRUE(e.partial().records.empty());
    EXPECT_NE(std::string(e.what()).find("initial state"), std::string::npos);
  }
  // Finite data whose charge source overflows inside the Poisson transform:
  // the initial record survives and the first potential half step fails.
  WaveState m = gaussian(64);
  params.p = 1.0;
  RealField doping(m.grid());
  for (std::size_t i = 0; i < doping.size(); ++i) doping[i] = (i % 2 == 0 ? 1.0 : -1.0) * 1.5e308;
  params.doping = doping;
  try {
    run_fractional_step(m, 1.0, 0.1, 0.01, params);
    FAIL() << "expected RunFailure";
  } catch (const RunFailure& e) {
    EXPECT_EQ(e.partial().records.size(), 1u);
    EXPECT_NE(std::string(e.what()).find("strip 0"), std::string::npos);
  }
}

TEST(Fractional, LedgerHoldsForGaussianPacket) {
  PhysicsParams params;
  params.p = 3.0;
  const Trajectory tr = run_fractional_step(gaussian(256), 1.0, 0.1, 0.1 / 16, params);
  const LedgerReport rep = discrete_energy_ledger(tr, 1e-8 * tr.initial_energy);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.rows.size(), tr.records.size());
  EXPECT_DOUBLE_EQ(rep.damping, 0.1);
  for (const auto& row : rep.rows) {
    if (row.k == 0) continue;
    EXPECT_LE(row.jump, 0.0);
    EXPECT_DOUBLE_EQ(row.jump_bound, -0.05 * row.lambda_l2_minus);
  }
  EXPECT_TRUE(std::isnan(rep.rows.back().energy_next_minus));
}

TEST(Fractional, LedgerDetectsViolations) {
  PhysicsParams params;
  Trajectory tr = run_fractional_step(gaussian(128), 0.4, 0.1, 0.025, params);
  tr.records[2].energy_plus += 1.0;
  const LedgerReport rep = discrete_energy_ledger(tr, 1e-10);
  EXPECT_FALSE(rep.pass());
  EXPECT_EQ(rep.jump_violations, 1u);
  EXPECT_GE(rep.cumulative_violations, 1u);
  Trajectory empty;
  EXPECT_THROW(discrete_energy_ledger(empty, 1.0), std::invalid_argument);
}

TEST(Fractional, CollisionlessRunHasNoJumps) {
  PhysicsParams params;
  params.alpha = 0.0;
  const Trajectory tr = run_fractional_step(gaussian(128, 20.0, 1.0), 0.5, 0.1, 0.025, params);
  const LedgerReport rep = discrete_energy_ledger(tr, 1e-12 * tr.initial_energy);
  EXPECT_TRUE(rep.pass());
  for (const auto& row : rep.rows) EXPECT_EQ(row.jump, 0.0);
}

TEST(Fractional, ConstantModulusClosedForm) {
  const Grid g = make_grid(2, 16, 1.0);
  PhysicsParams params;
  params.p = 3.0;
  params.hbar = 0.5;
  const double amp = 1.2;
  const double theta0 = 2.5;
  const WaveState s{ComplexField(g, std::polar(amp, theta0)), 0.0, 0.5};
  const double tau = 0.1;
  const Trajectory tr = run_fractional_step(s, 1.0, tau, tau / 8, params);
  const double omega = std::pow(amp, params.p - 1.0) / params.hbar;
  double theta = theta0;
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    theta = wrap_2pi(theta - omega * tau);
    const Complex minus = std::polar(amp, theta);
    theta = (1 - tau) * theta;
    const Complex plus = std::polar(amp, theta);
    double em = 0.0;
    double ep = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      em += std::norm(tr.records[k].psi_minus.psi[i] - minus);
      ep += std::norm(tr.records[k].psi_plus.psi[i] - plus);
    }
    EXPECT_LE(std::sqrt(em * g.cell_volume()), 1e-8) << "strip " << k;
    EXPECT_LE(std::sqrt(ep * g.cell_volume()), 1e-8) << "strip " << k;
  }
}

TEST(Fractional, RelaxationScalesDamping) {
  PhysicsParams params;
  params.alpha = 1.0;
  params.epsilon_relax = 0.5;
  const Trajectory tr = run_fractional_step(gaussian(128), 0.2, 0.1, 0.025, params);
  const auto& r = tr.records[1];
  const HydroFields& hm = r.hydro_minus;
  const HydroFields& hp = r.hydro_plus;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < hm.rho.size(); ++i) {
    if (hm.rho[i] < 1e-6) continue;
    num += std::abs(hp.lambda[0][i] - 0.8 * hm.lambda[0][i]);
    den += std::abs(hm.lambda[0][i]);
  }
  EXPECT_LE(num / den, 1e-6);
}
