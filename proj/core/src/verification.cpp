#include "qhd/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qhd/nls.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

double pressure_value(double rho, double p) {
  return (p - 1.0) / (p + 1.0) * std::pow(std::max(rho, 0.0), 0.5 * (p + 1.0));
}

double internal_energy_value(double rho, double p) {
  return 2.0 / (p + 1.0) * std::pow(std::max(rho, 0.0), 0.5 * (p + 1.0));
}

RealField pressure(const RealField& rho, double p) {
  RealField out(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = pressure_value(rho[i], p);
  return out;
}

RealField internal_energy(const RealField& rho, double p) {
  RealField out(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = internal_energy_value(rho[i], p);
  return out;
}

QhdEnergy qhd_energy(const HydroFields& h, const RealField& potential, double p, double hbar) {
  require_same_grid(potential, h.grid());
  QhdEnergy e;
  const double g = l2_norm(h.grad_sqrt_rho);
  const double l = l2_norm(h.lambda);
  e.quantum = 0.5 * hbar * hbar * g * g;
  e.kinetic = 0.5 * l * l;
  e.internal = integrate(internal_energy(h.rho, p));
  const double gv = l2_norm(spectral_gradient(potential));
  e.electrostatic = 0.5 * gv * gv;
  return e;
}

double energy_equivalence_error(const Trajectory& traj) {
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    const HydroFields h = hydrodynamic_fields(s.state);
    const RealField v = electrostatic_potential(s.state.psi, traj.params);
    const double eq = qhd_energy(h, v, traj.params.p, s.state.hbar).total();
    const double es = schrodinger_energy(s.state, traj.params).total();
    const double scale = std::max(std::abs(es), std::numeric_limits<double>::min());
    worst = std::max(worst, std::abs(eq - es) / scale);
  }
  return worst;
}

BohmForms bohm_forms(const RealField& rho, double hbar, std::optional<double> delta_vac) {
  const Grid& grid = rho.grid();
  const int dim = grid.dim();
  const auto du = static_cast<std::size_t>(dim);

  RealField sq(grid);
  double max_sq = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    sq[i] = std::sqrt(std::max(rho[i], 0.0));
    max_sq = std::max(max_sq, sq[i]);
  }
  const double delta = delta_vac.value_or(std::max(1e-12 * max_sq, std::numeric_limits<double>::min()));
  const double min_rho = *std::min_element(rho.begin(), rho.end());
  if (!(min_rho > delta * delta)) throw std::invalid_argument("Bohm forms need a vacuum-free density");

  const double h2 = hbar * hbar;
  BohmForms out;

  // hbar^2/2 rho grad(Laplacian sqrt rho / sqrt rho)
  RealField q = spectral_laplacian(sq);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] /= sq[i];
  out.potential_form = spectral_gradient(q);
  for (auto& c : out.potential_form) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= 0.5 * h2 * rho[i];
  }

  // hbar^2/4 div(rho Hess log rho)
  RealField logr(grid);
  for (std::size_t i = 0; i < rho.size(); ++i) logr[i] = std::log(rho[i]);
  const RealVectorField glog = spectral_gradient(logr);
  out.log_form.assign(du, RealField(grid));
  for (std::size_t i = 0; i < du; ++i) {
    for (int j = 0; j < dim; ++j) {
      RealField hij = spectral_derivative(glog[i], j);
      for (std::size_t n = 0; n < hij.size(); ++n) hij[n] *= rho[n];
      const RealField d = spectral_derivative(hij, j);
      for (std::size_t n = 0; n < d.size(); ++n) out.log_form[i][n] += 0.25 * h2 * d[n];
    }
  }

  // hbar^2/4 Laplacian grad rho - hbar^2 div(grad sqrt rho (x) grad sqrt rho)
  const RealVectorField lap_grad = spectral_gradient(spectral_laplacian(rho));
  const RealVectorField gsq = spectral_gradient(sq);
  out.split_form.assign(du, RealField(grid));
  for (std::size_t i = 0; i < du; ++i) {
    for (int j = 0; j < dim; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      RealField prod(grid);
      for (std::size_t n = 0; n < prod.size(); ++n) prod[n] = gsq[ju][n] * gsq[i][n];
      const RealField d = spectral_derivative(prod, j);
      for (std::size_t n = 0; n < d.size(); ++n) out.split_form[i][n] -= h2 * d[n];
    }
    for (std::size_t n = 0; n < rho.size(); ++n) out.split_form[i][n] += 0.25 * h2 * lap_grad[i][n];
  }
  return out;
}

double bohm_form_residual(const RealField& rho, double hbar, std::optional<double> delta_vac) {
  const BohmForms f = bohm_forms(rho, hbar, delta_vac);
  auto diff = [](const RealVectorField& a, const RealVectorField& b) {
    RealVectorField d = a;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t n = 0; n < d[i].size(); ++n) d[i][n] -= b[i][n];
    }
    return l2_norm(d);
  };
  return std::max({diff(f.potential_form, f.log_form), diff(f.potential_form, f.split_form),
                   diff(f.log_form, f.split_form)});
}

std::vector<const Sample*> ordered_samples(const Trajectory& traj) {
  std::vector<const Sample*> out;
  out.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) out.push_back(&s);
  std::stable_sort(out.begin(), out.end(), [](const Sample* a, const Sample* b) { return a->t < b->t; });
  return out;
}

namespace {

// Trapezoid rule in time over the ordered samples. `integrand` returns the
// per-term spatial integrals at one sample; samples outside the time support
// of the test function contribute zero.
template <class F>
WeakFormResidual time_quadrature(const Trajectory& traj, const TestFunction& phi, std::size_t terms, F integrand) {
  if (traj.samples.empty()) throw std::invalid_argument("trajectory holds no samples");
  const auto samples = ordered_samples(traj);
  WeakFormResidual out;
  out.terms.assign(terms, 0.0);
  std::vector<double> prev(terms, 0.0);
  std::vector<double> cur(terms, 0.0);
  double t_prev = 0.0;
  bool first = true;
  for (const Sample* s : samples) {
    const auto tf = phi.time_factor(s->t);
    std::fill(cur.begin(), cur.end(), 0.0);
    if (tf[0] != 0.0 || tf[1] != 0.0) {
      integrand(*s, cur);
      ++out.samples_used;
    }
    if (!first) {
      const double w = 0.5 * (s->t - t_prev);
      for (std::size_t i = 0; i < terms; ++i) out.terms[i] += w * (prev[i] + cur[i]);
    }
    prev.swap(cur);
    t_prev = s->t;
    first = false;
  }
  return out;
}

double dot_direction(const RealVectorField& v, const std::array<double, 3>& d, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i][n] * d[i];
  return s;
}

}  // namespace

WeakFormResidual continuity_residual(const Trajectory& traj, const TestFunction& eta) {
  WeakFormResidual out = time_quadrature(traj, eta, 3, [&](const Sample& s, std::vector<double>& acc) {
    const HydroFields h = hydrodynamic_fields(s.state);
    const TestFunctionSample ts = eta.evaluate(s.state.grid(), s.t);
    double a = 0.0;
    double b = 0.0;
    for (std::size_t n = 0; n < h.rho.size(); ++n) {
      a += h.rho[n] * ts.time_derivative[n];
      for (std::size_t i = 0; i < h.current.size(); ++i) b += h.current[i][n] * ts.gradient[i][n];
    }
    const double dv = s.state.grid().cell_volume();
    acc[0] = a * dv;
    acc[1] = b * dv;
  });
  if (eta.touches_initial_time()) {
    const WaveState& psi0 = traj.records.front().psi_minus;
    const TestFunctionSample ts = eta.evaluate(psi0.grid(), 0.0);
    double c = 0.0;
    for (std::size_t n = 0; n < psi0.psi.size(); ++n) c += std::norm(psi0.psi[n]) * ts.value[n];
    out.terms[2] = c * psi0.grid().cell_volume();
  }
  out.value = 0.0;
  for (double t : out.terms) out.value += t;
  return out;
}

WeakFormResidual momentum_residual(const Trajectory& traj, const TestFunction& zeta,
                                   const MomentumFormOptions& options) {
  const PhysicsParams& params = traj.params;
  const std::array<double, 3> d = zeta.direction();
  const double rate = options.collision ? params.collision_rate() : 0.0;
  const bool with_g = options.g_term && params.g.kind != GKind::none;

  WeakFormResidual out = time_quadrature(traj, zeta, 9, [&](const Sample& s, std::vector<double>& acc) {
    const Grid& grid = s.state.grid();
    const double hbar = s.state.hbar;
    const HydroFields h = hydrodynamic_fields(s.state);
    const TestFunctionSample ts = zeta.evaluate(grid, s.t);
    const RealVectorField grad_v = spectral_gradient(electrostatic_potential(s.state.psi, params));
    const RealField pr = pressure(h.rho, params.p);
    RealField g;
    RealVectorField grad_rho;
    if (with_g) {
      g = g_field(s.state, params);
      grad_rho = spectral_gradient(h.rho);
    }
    std::array<double, 8> a{};
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const double eta = ts.value[n];
      const double div_zeta = dot_direction(ts.gradient, d, n);
      const double j_d = dot_direction(h.current, d, n);
      a[0] += j_d * ts.time_derivative[n];
      double lam_grad = 0.0;
      for (std::size_t i = 0; i < h.lambda.size(); ++i) lam_grad += h.lambda[i][n] * ts.gradient[i][n];
      a[1] += lam_grad * dot_direction(h.lambda, d, n);
      a[2] += pr[n] * div_zeta;
      a[3] -= h.rho[n] * dot_direction(grad_v, d, n) * eta;
      a[4] -= rate * j_d * eta;
      if (with_g) a[5] += g[n] * (dot_direction(grad_rho, d, n) * eta + h.rho[n] * div_zeta);
      double gs_grad = 0.0;
      for (std::size_t i = 0; i < h.grad_sqrt_rho.size(); ++i) gs_grad += h.grad_sqrt_rho[i][n] * ts.gradient[i][n];
      a[6] += hbar * hbar * gs_grad * dot_direction(h.grad_sqrt_rho, d, n);
      a[7] -= 0.25 * hbar * hbar * h.rho[n] * dot_direction(ts.laplacian_gradient, d, n);
    }
    const double dv = grid.cell_volume();
    for (std::size_t i = 0; i < a.size(); ++i) acc[i] = a[i] * dv;
  });
  if (zeta.touches_initial_time()) {
    const StripRecord& r0 = traj.records.front();
    const TestFunctionSample ts = zeta.evaluate(r0.psi_minus.grid(), 0.0);
    double c = 0.0;
    for (std::size_t n = 0; n < ts.value.size(); ++n) c += dot_direction(r0.hydro_minus.current, d, n) * ts.value[n];
    out.terms[8] = c * r0.psi_minus.grid().cell_volume();
  }
  out.value = 0.0;
  for (double t : out.terms) out.value += t;
  return out;
}

}  // namespace qhd
