#include "qhd/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qhd/spectral.hpp"

namespace qhd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double resolve_threshold(const ComplexField& psi, std::optional<double> delta_vac) {
  if (!delta_vac) return default_vacuum_threshold(psi);
  if (!(*delta_vac > 0.0)) throw std::invalid_argument("vacuum threshold must be positive");
  return *delta_vac;
}

// Phase on [cut, cut + 2 pi).
double branch_phase(Complex z, double cut) {
  double theta = std::arg(z) - cut;
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  return cut + theta;
}

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

}  // namespace

std::size_t PolarData::vacuum_count() const {
  return static_cast<std::size_t>(std::count(vacuum_mask.begin(), vacuum_mask.end(), true));
}

double default_vacuum_threshold(const ComplexField& psi) {
  return std::max(1e-12 * max_abs(psi), std::numeric_limits<double>::min());
}

PolarData polar_factor(const ComplexField& psi, std::optional<double> delta_vac) {
  PolarData out;
  out.delta_vac = resolve_threshold(psi, delta_vac);
  out.sqrt_rho = RealField(psi.grid());
  out.phi = ComplexField(psi.grid());
  out.vacuum_mask.assign(psi.size(), false);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double a = std::abs(psi[i]);
    out.sqrt_rho[i] = a;
    if (a <= out.delta_vac) {
      out.vacuum_mask[i] = true;
    } else {
      out.phi[i] = psi[i] / a;
    }
  }
  return out;
}

HydroFields hydrodynamic_fields(const WaveState& state, std::optional<double> delta_vac) {
  const ComplexField& psi = state.psi;
  const Grid& g = psi.grid();
  const PolarData polar = polar_factor(psi, delta_vac);
  const ComplexVectorField grad = spectral_gradient(psi);

  HydroFields h;
  h.sqrt_rho = polar.sqrt_rho;
  h.rho = RealField(g);
  for (std::size_t i = 0; i < psi.size(); ++i) h.rho[i] = polar.sqrt_rho[i] * polar.sqrt_rho[i];
  h.vacuum_mask = polar.vacuum_mask;

  const auto dim = static_cast<std::size_t>(g.dim());
  h.grad_sqrt_rho.assign(dim, RealField(g));
  h.lambda.assign(dim, RealField(g));
  h.current.assign(dim, RealField(g));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const Complex w = std::conj(polar.phi[i]) * grad[a][i];
      h.grad_sqrt_rho[a][i] = w.real();
      h.lambda[a][i] = polar.vacuum_mask[i] ? 0.0 : state.hbar * w.imag();
      h.current[a][i] = state.hbar * (std::conj(psi[i]) * grad[a][i]).imag();
    }
  }
  return h;
}

double current_consistency_residual(const HydroFields& h) {
  double worst = 0.0;
  for (std::size_t a = 0; a < h.current.size(); ++a) {
    for (std::size_t i = 0; i < h.rho.size(); ++i) {
      if (h.vacuum_mask[i]) continue;
      worst = std::max(worst, std::abs(h.sqrt_rho[i] * h.lambda[a][i] - h.current[a][i]));
    }
  }
  return worst;
}

double null_form_residual(const WaveState& state, std::optional<double> delta_vac) {
  const ComplexField& psi = state.psi;
  const PolarData polar = polar_factor(psi, delta_vac);
  const ComplexVectorField grad = spectral_gradient(psi);
  const RealVectorField grad_amp = spectral_gradient(polar.sqrt_rho);
  const double hb2 = state.hbar * state.hbar;
  const auto dim = grad.size();

  double worst = 0.0;
  std::vector<double> lam(dim);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (polar.vacuum_mask[i]) continue;
    for (std::size_t a = 0; a < dim; ++a) lam[a] = state.hbar * (std::conj(polar.phi[i]) * grad[a][i]).imag();
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t k = j; k < dim; ++k) {
        const double lhs = hb2 * (std::conj(grad[j][i]) * grad[k][i]).real();
        const double rhs = hb2 * grad_amp[j][i] * grad_amp[k][i] + lam[j] * lam[k];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

double irrotationality_residual(const HydroFields& h) {
  const Grid& g = h.grid();
  if (g.dim() == 1) return 0.0;

  if (g.dim() == 2) {
    const RealField dxjy = spectral_derivative(h.current[1], 0);
    const RealField dyjx = spectral_derivative(h.current[0], 1);
    RealField r(g);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double curl = dxjy[i] - dyjx[i];
      const double rhs =
          2.0 * cross2(h.grad_sqrt_rho[0][i], h.grad_sqrt_rho[1][i], h.lambda[0][i], h.lambda[1][i]);
      r[i] = curl - rhs;
    }
    return l2_norm(r);
  }

  // 3D: component c of a x b is a_{c+1} b_{c+2} - a_{c+2} b_{c+1}.
  RealVectorField r(3, RealField(g));
  for (int c = 0; c < 3; ++c) {
    const int p = (c + 1) % 3;
    const int q = (c + 2) % 3;
    const RealField dp_jq = spectral_derivative(h.current[static_cast<std::size_t>(q)], p);
    const RealField dq_jp = spectral_derivative(h.current[static_cast<std::size_t>(p)], q);
    auto& out = r[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double rhs = 2.0 * (h.grad_sqrt_rho[static_cast<std::size_t>(p)][i] * h.lambda[static_cast<std::size_t>(q)][i] -
                                h.grad_sqrt_rho[static_cast<std::size_t>(q)][i] * h.lambda[static_cast<std::size_t>(p)][i]);
      out[i] = dp_jq[i] - dq_jp[i] - rhs;
    }
  }
  return l2_norm(r);
}

double adaptive_branch_cut(const ComplexField& psi, const std::vector<bool>& vacuum_mask) {
  // Candidate cuts at m * 2 pi / kBins. A cut costs |psi_i| |psi_j| for every
  // grid edge (i, j) whose short phase arc it crosses, which is where the
  // damped phase would jump.
  constexpr long kBins = 256;
  constexpr double kWidth = kTwoPi / static_cast<double>(kBins);
  const Grid& g = psi.grid();
  const std::size_t n = g.points_per_axis();
  std::vector<double> diff(static_cast<std::size_t>(kBins) + 1, 0.0);
  double total = 0.0;
  auto add = [&](long first, long count, double w) {
    total += w;
    const long s = ((first % kBins) + kBins) % kBins;
    if (s + count <= kBins) {
      diff[static_cast<std::size_t>(s)] += w;
      diff[static_cast<std::size_t>(s + count)] -= w;
    } else {
      diff[static_cast<std::size_t>(s)] += w;
      diff[static_cast<std::size_t>(kBins)] -= w;
      diff[0] += w;
      diff[static_cast<std::size_t>(s + count - kBins)] -= w;
    }
  };
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (vacuum_mask[i]) continue;
    const auto idx = g.unravel(i);
    const double theta = branch_phase(psi[i], 0.0);
    for (int a = 0; a < g.dim(); ++a) {
      const std::size_t stride = g.stride(a);
      const std::size_t j = idx[static_cast<std::size_t>(a)] + 1 == n ? i + stride - n * stride : i + stride;
      if (vacuum_mask[j]) continue;
      const double delta = std::remainder(std::arg(psi[j]) - std::arg(psi[i]), kTwoPi);
      const double lo = std::min(theta, theta + delta);
      const double hi = std::max(theta, theta + delta);
      const auto first = static_cast<long>(std::floor(lo / kWidth)) + 1;
      const auto last = static_cast<long>(std::floor(hi / kWidth));
      if (last >= first) add(first, last - first + 1, std::abs(psi[i]) * std::abs(psi[j]));
    }
  }
  std::vector<double> cost(static_cast<std::size_t>(kBins));
  double running = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  for (long m = 0; m < kBins; ++m) {
    running += diff[static_cast<std::size_t>(m)];
    cost[static_cast<std::size_t>(m)] = running;
    lowest = std::min(lowest, running);
  }
  const double slack = lowest + 1e-12 * total;
  // Angle 0 wins whenever it is optimal, so the choice reduces to the fixed
  // branch when nothing crosses it. Otherwise take the middle of the longest
  // run of optimal candidates, as far from crossings as possible.
  if (cost[0] <= slack) return 0.0;
  long best_start = 0;
  long best_len = 0;
  for (long m = 0; m < kBins; ++m) {
    if (cost[static_cast<std::size_t>(m)] > slack || cost[static_cast<std::size_t>((m + kBins - 1) % kBins)] <= slack) {
      continue;
    }
    long len = 0;
    while (len < kBins && cost[static_cast<std::size_t>((m + len) % kBins)] <= slack) ++len;
    if (len > best_len) {
      best_len = len;
      best_start = m;
    }
  }
  return kWidth * static_cast<double>((best_start + best_len / 2) % kBins);
}

WaveState phase_damping_update(const WaveState& state, double tau, std::optional<double> delta_vac,
                               BranchPolicy branch) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("phase damping requires 0 < tau < 1");
  const PolarData polar = polar_factor(state.psi, delta_vac);
  const double cut = branch == BranchPolicy::adaptive ? adaptive_branch_cut(state.psi, polar.vacuum_mask) : 0.0;

  WaveState out = state;
  for (std::size_t i = 0; i < out.psi.size(); ++i) {
    if (polar.vacuum_mask[i]) continue;
    const double theta = branch_phase(polar.phi[i], cut);
    // Rebuilding from the amplitude keeps |psi| unchanged to roundoff.
    out.psi[i] = std::polar(polar.sqrt_rho[i], (1.0 - tau) * theta);
  }
  return out;
}

double cut_proximity_fraction(const ComplexField& psi, double cut_angle, double width,
                              std::optional<double> delta_vac) {
  const PolarData polar = polar_factor(psi, delta_vac);
  std::size_t near = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (polar.vacuum_mask[i]) continue;
    ++total;
    const double theta = branch_phase(polar.phi[i], cut_angle) - cut_angle;
    if (theta < width || kTwoPi - theta < width) ++near;
  }
  return total == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(total);
}

double winding_number(const ComplexField& psi, int axis) {
  const Grid& g = psi.grid();
  if (axis < 0 || axis >= g.dim()) throw std::out_of_range("winding axis out of range");
  const PolarData polar = polar_factor(psi);
  const std::size_t n = g.points_per_axis();
  const std::size_t stride = g.stride(axis);
  double total = 0.0;
  std::optional<double> first;
  std::optional<double> prev;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = j * stride;
    if (polar.vacuum_mask[i]) continue;
    const double a = std::arg(psi[i]);
    if (!first) first = a;
    if (prev) total += std::remainder(a - *prev, kTwoPi);
    prev = a;
  }
  if (first && prev) total += std::remainder(*first - *prev, kTwoPi);
  return total / kTwoPi;
}

}  // namespace qhd
