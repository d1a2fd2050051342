#pragma once

#include <optional>
#include <vector>

#include "qhd/field.hpp"
#include "qhd/fractional.hpp"
#include "qhd/polar.hpp"
#include "qhd/test_function.hpp"

namespace qhd {

/// P(rho) = (p-1)/(p+1) rho^{(p+1)/2}. Negative roundoff in rho is clamped to 0.
RealField pressure(const RealField& rho, double p);

/// f(rho) = 2/(p+1) rho^{(p+1)/2}.
RealField internal_energy(const RealField& rho, double p);

/// Scalar versions of the two laws above.
double pressure_value(double rho, double p);
double internal_energy_value(double rho, double p);

struct QhdEnergy {
  double quantum = 0.0;        ///< hbar^2/2 int |grad sqrt rho|^2
  double kinetic = 0.0;        ///< 1/2 int |Lambda|^2
  double internal = 0.0;       ///< int f(rho)
  double electrostatic = 0.0;  ///< 1/2 int |grad V|^2

  double total() const noexcept { return quantum + kinetic + internal + electrostatic; }
};

/// Hydrodynamic energy of (sqrt rho, Lambda, V).
QhdEnergy qhd_energy(const HydroFields& h, const RealField& potential, double p, double hbar);

/// Max relative mismatch |E_qhd - E_schrodinger| / max(|E_schrodinger|, tiny)
/// over every sample of `traj`; V is re-solved per sample.
double energy_equivalence_error(const Trajectory& traj);

struct BohmForms {
  RealVectorField potential_form;  ///< hbar^2/2 rho grad(Laplacian sqrt rho / sqrt rho)
  RealVectorField log_form;        ///< hbar^2/4 div(rho Hess log rho)
  RealVectorField split_form;      ///< hbar^2/4 Laplacian grad rho - hbar^2 div(grad sqrt rho (x) grad sqrt rho)
};

/// Evaluates the three forms of the dispersive term spectrally.
/// Throws std::invalid_argument when min rho <= delta_vac^2.
BohmForms bohm_forms(const RealField& rho, double hbar, std::optional<double> delta_vac = std::nullopt);

/// Max pairwise discrete-L2 difference among the three forms.
double bohm_form_residual(const RealField& rho, double hbar, std::optional<double> delta_vac = std::nullopt);

struct WeakFormResidual {
  double value = 0.0;
  /// Space-time integral of each term (order documented per residual).
  std::vector<double> terms;
  std::size_t samples_used = 0;
};

/// int int rho d_t eta + J . grad eta dx dt + int rho0 eta(0) dx.
/// Terms: {rho d_t eta, J . grad eta, initial}.
WeakFormResidual continuity_residual(const Trajectory& traj, const TestFunction& eta);

struct MomentumFormOptions {
  /// Include -rate * J . zeta (rate = alpha or alpha/epsilon).
  bool collision = true;
  /// Include g (grad rho . zeta + rho div zeta) when g is configured.
  bool g_term = true;
};

/// Momentum balance in weak form. Terms, in order:
/// {J.d_t zeta, Lambda(x)Lambda : grad zeta, P div zeta, -rho grad V . zeta,
///  -rate J . zeta, g-term, hbar^2 grad sqrt rho (x) grad sqrt rho : grad zeta,
///  -hbar^2/4 rho Laplacian div zeta, initial}.
WeakFormResidual momentum_residual(const Trajectory& traj, const TestFunction& zeta,
                                   const MomentumFormOptions& options = {});

/// Samples of `traj` ordered by time (stable: minus before plus at a boundary).
std::vector<const Sample*> ordered_samples(const Trajectory& traj);

}  // namespace qhd
