#pragma once

#include <functional>

#include "qhd/field.hpp"

namespace qhd {

// Normalization convention, used by every routine in the library:
//   forward:  F_k = sum_j f_j exp(-i k.x_j)             (unscaled)
//   inverse:  f_j = (1/N_tot) sum_k F_k exp(+i k.x_j)
// so sum_j |f_j|^2 = (1/N_tot) sum_k |F_k|^2.
//
// First derivatives drop the Nyquist coefficient (its sign is ambiguous and
// keeping it makes the derivative of a real field complex). Even multipliers
// such as -Laplacian and (1 + |k|^2)^s keep it.

SpectralField forward(const ComplexField& f);
SpectralField forward(const RealField& f);
ComplexField inverse(const SpectralField& s);

/// Discrete L2 norm of the physical field recovered from `s`.
double spectral_l2_norm(const SpectralField& s);

/// Multiplies every coefficient by `multiplier(flat_index)`.
void apply_multiplier(SpectralField& s, const std::function<Complex(std::size_t)>& multiplier);

/// d/dx_axis of a periodic field.
ComplexField spectral_derivative(const ComplexField& f, int axis);
RealField spectral_derivative(const RealField& f, int axis);

/// Gradient: component j is inverse(i k_j * forward(f)).
ComplexVectorField spectral_gradient(const ComplexField& f);
RealVectorField spectral_gradient(const RealField& f);

/// Divergence of a vector field.
RealField spectral_divergence(const RealVectorField& v);

/// Laplacian, keeping the Nyquist mode (-|k|^2 multiplier).
RealField spectral_laplacian(const RealField& f);

/// Periodic Poisson solve -Laplacian V = (rho - mean rho) - (C - mean C) with
/// zero-mean V. Without `doping` the background is C = 0.
RealField solve_poisson(const RealField& rho);
RealField solve_poisson(const RealField& rho, const RealField& doping);

/// (I - Laplacian)^{1/4}: spectrum times (1 + |k|^2)^{1/4}.
ComplexField bessel_quarter_power(const ComplexField& f);

/// Zeroes every coefficient with |k_j| > (2/3) k_max on any axis.
ComplexField dealias_two_thirds(const ComplexField& f);

/// Gaussian low-pass exp(-width^2 |k|^2 / 2); width 0 is the identity.
RealField gaussian_smooth(const RealField& f, double width);

}  // namespace qhd
