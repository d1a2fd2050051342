#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "qhd/grid.hpp"

namespace qhd {

using Complex = std::complex<double>;

struct PhysicalSpace {};
struct FourierSpace {};

/// Grid-attached array of samples. `Space` tags physical samples apart from
/// transform coefficients so the two cannot be mixed by accident.
template <class T, class Space = PhysicalSpace>
class BasicField {
 public:
  using value_type = T;

  BasicField() = default;
  explicit BasicField(Grid grid, T fill = T{}) : grid_(std::move(grid)), values_(grid_.size(), fill) {}
  BasicField(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw std::invalid_argument("field value count does not match grid size");
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }

  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const T& v) {
      if constexpr (std::is_same_v<T, Complex>) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
      } else {
        return std::isfinite(v);
      }
    });
  }

 private:
  Grid grid_;
  std::vector<T> values_;
};

using RealField = BasicField<double>;
using ComplexField = BasicField<Complex>;
using SpectralField = BasicField<Complex, FourierSpace>;

/// One field per spatial axis (size == grid.dim()).
using RealVectorField = std::vector<RealField>;
using ComplexVectorField = std::vector<ComplexField>;

template <class T, class S>
void require_same_grid(const BasicField<T, S>& a, const Grid& g) {
  if (!(a.grid() == g)) throw std::invalid_argument("fields live on different grids");
}

/// Cell-volume-weighted sum, i.e. the midpoint-rule integral over the box.
inline double integrate(const RealField& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * f.grid().cell_volume();
}

/// Discrete L2 norm (sum |f|^2 dV)^(1/2).
template <class T>
double l2_norm(const BasicField<T>& f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s * f.grid().cell_volume());
}

inline double l2_norm(const RealVectorField& f) {
  double s = 0.0;
  for (const auto& c : f) {
    const double n = l2_norm(c);
    s += n * n;
  }
  return std::sqrt(s);
}

template <class T, class S>
double max_abs(const BasicField<T, S>& f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, std::abs(v));
  return m;
}

inline RealField modulus(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]);
  return out;
}

inline RealField modulus_squared(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::norm(f[i]);
  return out;
}

inline ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

inline RealField real_part(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

/// Mean value over the box.
inline double mean(const RealField& f) { return integrate(f) / f.grid().volume(); }

}  // namespace qhd
