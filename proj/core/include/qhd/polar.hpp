#pragma once

#include <optional>
#include <vector>

#include "qhd/field.hpp"
#include "qhd/physics.hpp"

namespace qhd {

/// Amplitude / unitary-factor split psi = sqrt_rho * phi.
///
/// phi = psi/|psi| off the vacuum set and phi = 0 on it, where the vacuum set is
/// {|psi| <= delta_vac}.
struct PolarData {
  RealField sqrt_rho;
  ComplexField phi;
  std::vector<bool> vacuum_mask;
  double delta_vac = 0.0;

  std::size_t vacuum_count() const;
};

/// Observables of the Madelung picture, built from one wave function.
struct HydroFields {
  RealField sqrt_rho;
  RealVectorField grad_sqrt_rho;  ///< Re(conj(phi) grad psi)
  RealVectorField lambda;         ///< hbar Im(conj(phi) grad psi), zero on vacuum
  RealVectorField current;        ///< hbar Im(conj(psi) grad psi)
  RealField rho;
  std::vector<bool> vacuum_mask;

  const Grid& grid() const noexcept { return rho.grid(); }
};

/// Default vacuum threshold 1e-12 * max|psi|, floored at the smallest normal double.
double default_vacuum_threshold(const ComplexField& psi);

PolarData polar_factor(const ComplexField& psi, std::optional<double> delta_vac = std::nullopt);

HydroFields hydrodynamic_fields(const WaveState& state, std::optional<double> delta_vac = std::nullopt);

/// Largest |sqrt_rho * lambda - current| over non-vacuum points.
double current_consistency_residual(const HydroFields& h);

/// Max over non-vacuum points and index pairs (j,k) of
///   | hbar^2 Re(d_j conj(psi) d_k psi) - (hbar^2 d_j sqrt_rho d_k sqrt_rho + Lambda_j Lambda_k) |.
/// d_j sqrt_rho on the right is the spectral derivative of |psi|, so the
/// residual measures discretization error and converges under refinement.
double null_form_residual(const WaveState& state, std::optional<double> delta_vac = std::nullopt);

/// Discrete L2 norm of curl J - 2 grad sqrt_rho x Lambda (scalar curl in 2D,
/// vector curl in 3D). Zero in 1D.
double irrotationality_residual(const HydroFields& h);

/// Where the phase branch [cut, cut + 2 pi) is anchored.
enum class BranchPolicy {
  fixed,     ///< theta in [0, 2 pi)
  adaptive,  ///< cut at the angle crossed by the least amplitude-weighted grid edges
};

/// Angle of the branch cut the adaptive policy would pick for `psi`.
double adaptive_branch_cut(const ComplexField& psi, const std::vector<bool>& vacuum_mask);

/// Phase-damping update psi -> psi * exp(-i tau theta), theta = arg(phi) on the
/// selected branch; vacuum points are left untouched. tau must lie in (0,1).
WaveState phase_damping_update(const WaveState& state, double tau, std::optional<double> delta_vac = std::nullopt,
                               BranchPolicy branch = BranchPolicy::fixed);

/// Fraction of non-vacuum points whose branch phase lies within `width` of the
/// cut on either side.
double cut_proximity_fraction(const ComplexField& psi, double cut_angle, double width = 0.1,
                              std::optional<double> delta_vac = std::nullopt);

/// Phase winding along `axis` through the first grid line: sum of wrapped
/// phase increments divided by 2 pi. Vacuum points are skipped.
double winding_number(const ComplexField& psi, int axis = 0);

}  // namespace qhd
