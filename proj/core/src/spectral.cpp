#include "qhd/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_plans.hpp"

namespace qhd {

namespace {

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

void check_finite(const ComplexField& f) {
  if (!f.all_finite()) throw std::domain_error("transform input contains non-finite values");
}

SpectralField forward_in_place(ComplexField f) {
  f.grid().plans().forward(as_fftw(f.data()));
  std::vector<Complex> v(f.begin(), f.end());
  return SpectralField(f.grid(), std::move(v));
}

ComplexField derivative_of_spectrum(const SpectralField& s, int axis) {
  const Grid& g = s.grid();
  SpectralField d = s;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (g.is_nyquist(axis, i)) {
      d[i] = 0.0;
    } else {
      d[i] *= Complex(0.0, g.k_component(axis, i));
    }
  }
  return inverse(d);
}

}  // namespace

SpectralField forward(const ComplexField& f) {
  check_finite(f);
  return forward_in_place(f);
}

SpectralField forward(const RealField& f) { return forward(to_complex(f)); }

ComplexField inverse(const SpectralField& s) {
  if (!s.all_finite()) throw std::domain_error("transform input contains non-finite values");
  std::vector<Complex> v(s.begin(), s.end());
  ComplexField out(s.grid(), std::move(v));
  s.grid().plans().backward(as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& z : out) z *= scale;
  return out;
}

double spectral_l2_norm(const SpectralField& s) {
  double sum = 0.0;
  for (const auto& z : s) sum += std::norm(z);
  return std::sqrt(sum / static_cast<double>(s.size()) * s.grid().cell_volume());
}

void apply_multiplier(SpectralField& s, const std::function<Complex(std::size_t)>& multiplier) {
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= multiplier(i);
}

ComplexField spectral_derivative(const ComplexField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw std::out_of_range("derivative axis out of range");
  return derivative_of_spectrum(forward(f), axis);
}

RealField spectral_derivative(const RealField& f, int axis) {
  return real_part(spectral_derivative(to_complex(f), axis));
}

ComplexVectorField spectral_gradient(const ComplexField& f) {
  const SpectralField s = forward(f);
  ComplexVectorField out;
  out.reserve(static_cast<std::size_t>(f.grid().dim()));
  for (int a = 0; a < f.grid().dim(); ++a) out.push_back(derivative_of_spectrum(s, a));
  return out;
}

RealVectorField spectral_gradient(const RealField& f) {
  const SpectralField s = forward(f);
  RealVectorField out;
  out.reserve(static_cast<std::size_t>(f.grid().dim()));
  for (int a = 0; a < f.grid().dim(); ++a) out.push_back(real_part(derivative_of_spectrum(s, a)));
  return out;
}

RealField spectral_divergence(const RealVectorField& v) {
  if (v.empty()) throw std::invalid_argument("empty vector field");
  const Grid& g = v.front().grid();
  if (static_cast<int>(v.size()) != g.dim()) throw std::invalid_argument("vector field size != grid dim");
  RealField out(g);
  for (int a = 0; a < g.dim(); ++a) {
    const RealField d = spectral_derivative(v[static_cast<std::size_t>(a)], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

RealField spectral_laplacian(const RealField& f) {
  SpectralField s = forward(f);
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -g.k_squared(i);
  return real_part(inverse(s));
}

RealField solve_poisson(const RealField& rho) {
  SpectralField s = forward(rho);
  const Grid& g = rho.grid();
  s[0] = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) s[i] /= g.k_squared(i);
  return real_part(inverse(s));
}

RealField solve_poisson(const RealField& rho, const RealField& doping) {
  require_same_grid(doping, rho.grid());
  RealField source = rho;
  for (std::size_t i = 0; i < source.size(); ++i) source[i] -= doping[i];
  return solve_poisson(source);
}

ComplexField bessel_quarter_power(const ComplexField& f) {
  SpectralField s = forward(f);
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::pow(1.0 + g.k_squared(i), 0.25);
  return inverse(s);
}

ComplexField dealias_two_thirds(const ComplexField& f) {
  SpectralField s = forward(f);
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(g.k_component(a, i)) > (2.0 / 3.0) * g.max_wavenumber(a)) {
        s[i] = 0.0;
        break;
      }
    }
  }
  return inverse(s);
}

RealField gaussian_smooth(const RealField& f, double width) {
  if (width <= 0.0) return f;
  SpectralField s = forward(f);
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::exp(-0.5 * width * width * g.k_squared(i));
  return real_part(inverse(s));
}

}  // namespace qhd
