#include "qhd/nls.hpp"

#include <algorithm>
#include <cmath>

#include "qhd/polar.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {

RealField nonlinear_potential(const ComplexField& psi, double p) {
  RealField w(psi.grid(), 1.0);
  if (p == 1.0) return w;
  const double half_exp = 0.5 * (p - 1.0);
  for (std::size_t i = 0; i < psi.size(); ++i) w[i] = std::pow(std::norm(psi[i]), half_exp);
  return w;
}

RealField charge_source(const ComplexField& psi, const PhysicsParams& params) {
  RealField s = modulus_squared(psi);
  if (params.doping) {
    require_same_grid(*params.doping, psi.grid());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= (*params.doping)[i];
  }
  return s;
}

void check_finite(const WaveState& s, const char* substep) {
  if (!s.psi.all_finite()) throw StepFailure(substep, s.t);
}

}  // namespace

RealField electrostatic_potential(const ComplexField& psi, const PhysicsParams& params) {
  return solve_poisson(charge_source(psi, params));
}

RealField g_field(const WaveState& state, const PhysicsParams& params) {
  const Grid& g = state.grid();
  switch (params.g.kind) {
    case GKind::none:
      return RealField(g);
    case GKind::density: {
      RealField out = modulus_squared(state.psi);
      for (auto& v : out) v *= params.g.coefficient;
      return out;
    }
    case GKind::lambda_smoothed: {
      const HydroFields h = hydrodynamic_fields(state);
      RealField lam2(g);
      for (const auto& c : h.lambda) {
        for (std::size_t i = 0; i < lam2.size(); ++i) lam2[i] += c[i] * c[i];
      }
      RealField out = gaussian_smooth(lam2, params.g.smoothing_width);
      for (auto& v : out) v *= params.g.coefficient;
      return out;
    }
  }
  return RealField(g);
}

double g_growth_ratio(const WaveState& state, const PhysicsParams& params) {
  if (params.g.kind == GKind::none) return 0.0;
  const RealField gv = g_field(state, params);
  const HydroFields h = hydrodynamic_fields(state);
  double worst = 0.0;
  for (std::size_t i = 0; i < gv.size(); ++i) {
    double lam2 = 0.0;
    double grad2 = 0.0;
    for (std::size_t a = 0; a < h.lambda.size(); ++a) {
      lam2 += h.lambda[a][i] * h.lambda[a][i];
      grad2 += h.grad_sqrt_rho[a][i] * h.grad_sqrt_rho[a][i];
    }
    const double u = h.sqrt_rho[i];
    const double bound = 1.0 + std::pow(u, 4.0) + std::pow(lam2, 2.0 / 3.0) + std::pow(grad2, 2.0 / 3.0);
    worst = std::max(worst, std::abs(gv[i]) / bound);
  }
  return worst;
}

RealField total_potential(const WaveState& state, const PhysicsParams& params) {
  RealField w = nonlinear_potential(state.psi, params.p);
  const RealField v = electrostatic_potential(state.psi, params);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += v[i];
  if (params.g.kind != GKind::none) {
    const RealField gv = g_field(state, params);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += gv[i];
  }
  return w;
}

StrangStepper::StrangStepper(const Grid& grid, double dt, const PhysicsParams& params, SplitFlags flags)
    : grid_(grid),
      dt_(dt),
      params_(params),
      flags_(flags),
      kinetic_(grid.size()),
      potential_depends_on_phase_(params.g.kind == GKind::lambda_smoothed) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be finite and non-zero");
  const double factor = 0.5 * params_.hbar * dt;
  for (std::size_t i = 0; i < kinetic_.size(); ++i) {
    kinetic_[i] = std::polar(1.0, -factor * grid.k_squared(i));
    if (!flags_.dealias) continue;
    for (int a = 0; a < grid.dim(); ++a) {
      if (std::abs(grid.k_component(a, i)) > (2.0 / 3.0) * grid.max_wavenumber(a)) kinetic_[i] = 0.0;
    }
  }
}

void StrangStepper::potential_half(WaveState& state, const char* name) {
  const bool reuse = cached_potential_ && !potential_depends_on_phase_ && cached_time_ == state.t;
  RealField w;
  if (reuse) {
    w = std::move(*cached_potential_);
  } else {
    try {
      w = total_potential(state, params_);
    } catch (const std::domain_error&) {
      throw StepFailure(name, state.t);
    }
  }
  cached_potential_.reset();
  const double factor = 0.5 * dt_ / params_.hbar;
  for (std::size_t i = 0; i < w.size(); ++i) state.psi[i] *= std::polar(1.0, -factor * w[i]);
  check_finite(state, name);
  // |psi| is unchanged by the phase rotation, so w is still the potential of
  // the updated state.
  if (!potential_depends_on_phase_) {
    cached_potential_ = std::move(w);
    cached_time_ = state.t;
  }
}

void StrangStepper::step(WaveState& state) {
  if (!(state.grid() == grid_)) throw std::invalid_argument("state grid does not match stepper grid");
  if (state.hbar != params_.hbar) throw std::invalid_argument("state hbar differs from physics hbar");
  check_finite(state, "input");
  if (flags_.potential) potential_half(state, "potential_half_1");
  if (flags_.kinetic) {
    cached_potential_.reset();
    SpectralField s = forward(state.psi);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= kinetic_[i];
    state.psi = inverse(s);
    check_finite(state, "kinetic");
  }
  state.t += dt_;
  if (flags_.potential) potential_half(state, "potential_half_2");
}

WaveState strang_step(const WaveState& state, double dt, const PhysicsParams& params, SplitFlags flags) {
  StrangStepper stepper(state.grid(), dt, params, flags);
  WaveState out = state;
  stepper.step(out);
  return out;
}

std::size_t substep_count(double tau, double dt) {
  if (!(tau > 0.0) || !(dt > 0.0)) throw std::invalid_argument("strip length and time step must be positive");
  const double ratio = tau / dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio) {
    throw std::invalid_argument("strip length must be an integer multiple of the time step");
  }
  return static_cast<std::size_t>(n);
}

StripResult evolve_strip(const WaveState& state, double tau, double dt, const PhysicsParams& params,
                         std::size_t snapshot_stride, bool sample_energy, SplitFlags flags) {
  const std::size_t n = substep_count(tau, dt);
  const double h = tau / static_cast<double>(n);
  StrangStepper stepper(state.grid(), h, params, flags);

  StripResult out{state, {}, {}};
  const double t0 = state.t;
  auto sample = [&](const WaveState& s) {
    out.diagnostics.times.push_back(s.t);
    out.diagnostics.masses.push_back(mass(s));
    if (sample_energy) out.diagnostics.energies.push_back(schrodinger_energy(s, params).total());
  };
  sample(out.state);
  for (std::size_t k = 1; k <= n; ++k) {
    stepper.step(out.state);
    sample(out.state);
    if (snapshot_stride > 0 && k < n && k % snapshot_stride == 0) out.snapshots.push_back(out.state);
  }
  out.state.t = t0 + tau;
  return out;
}

EnergyBreakdown schrodinger_energy(const WaveState& state, const PhysicsParams& params) {
  const Grid& g = state.grid();
  const double weight = g.cell_volume() / static_cast<double>(g.size());
  EnergyBreakdown e;

  const SpectralField psi_hat = forward(state.psi);
  double grad_sum = 0.0;
  for (std::size_t i = 0; i < psi_hat.size(); ++i) {
    const double amp2 = std::norm(psi_hat[i]);
    for (int a = 0; a < g.dim(); ++a) {
      if (g.is_nyquist(a, i)) continue;
      const double k = g.k_component(a, i);
      grad_sum += k * k * amp2;
    }
  }
  e.kinetic = 0.5 * state.hbar * state.hbar * grad_sum * weight;

  double internal = 0.0;
  const double power = 0.5 * (params.p + 1.0);
  for (const auto& z : state.psi) internal += std::pow(std::norm(z), power);
  e.internal = 2.0 / (params.p + 1.0) * internal * g.cell_volume();

  const SpectralField src_hat = forward(charge_source(state.psi, params));
  double field_sum = 0.0;
  double parts_sum = 0.0;
  for (std::size_t i = 1; i < src_hat.size(); ++i) {
    const double k2 = g.k_squared(i);
    const double v2 = std::norm(src_hat[i]) / (k2 * k2);
    parts_sum += std::norm(src_hat[i]) / k2;
    for (int a = 0; a < g.dim(); ++a) {
      if (g.is_nyquist(a, i)) continue;
      const double k = g.k_component(a, i);
      field_sum += k * k * v2;
    }
  }
  e.electrostatic = 0.5 * field_sum * weight;
  e.electrostatic_by_parts = 0.5 * parts_sum * weight;
  return e;
}

double mass(const WaveState& state) {
  double s = 0.0;
  for (const auto& z : state.psi) s += std::norm(z);
  return s * state.grid().cell_volume();
}

}  // namespace qhd
