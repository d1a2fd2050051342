#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace qhd {

namespace detail {
struct FftPlans;
}

/// Periodic box of side L (per axis) sampled by N points per axis.
///
/// Points are stored row-major with axis 0 slowest. Wavenumber tables are kept
/// in FFT order (0, 1, ..., N/2-1, -N/2, ..., -1) scaled by 2*pi/L, so the
/// entry at index i is the wavenumber of the i-th transform coefficient.
/// Copies share the immutable wavenumber tables and FFT plans.
class Grid {
 public:
  Grid() = default;

  int dim() const noexcept { return dim_; }
  std::size_t points_per_axis() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  double box_length(int axis = 0) const { return lengths_.at(static_cast<std::size_t>(axis)); }
  double spacing(int axis = 0) const { return box_length(axis) / static_cast<double>(n_); }
  double cell_volume() const noexcept { return cell_volume_; }
  /// Total volume L_0 * ... * L_{d-1}.
  double volume() const noexcept { return cell_volume_ * static_cast<double>(size_); }

  /// Wavenumbers of axis `axis` in FFT order.
  std::span<const double> wavenumbers(int axis) const;
  /// Largest |k| on axis `axis`, attained at the Nyquist mode.
  double max_wavenumber(int axis = 0) const;

  /// Physical coordinate of index i along `axis` (x_i = i * h).
  double coordinate(int axis, std::size_t i) const { return static_cast<double>(i) * spacing(axis); }

  /// Per-axis indices of flat index `flat`; unused axes are 0.
  std::array<std::size_t, 3> unravel(std::size_t flat) const noexcept;
  /// Stride of `axis` in the flat layout.
  std::size_t stride(int axis) const noexcept;

  /// |k|^2 of flat spectral index `flat`.
  double k_squared(std::size_t flat) const noexcept;
  /// Signed wavenumber along `axis` at flat spectral index `flat`.
  double k_component(int axis, std::size_t flat) const noexcept;
  /// True when flat spectral index touches the Nyquist mode on `axis`.
  bool is_nyquist(int axis, std::size_t flat) const noexcept;

  bool valid() const noexcept { return dim_ > 0; }

  const detail::FftPlans& plans() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.lengths_ == b.lengths_;
  }

 private:
  friend Grid make_grid(int dim, std::size_t points_per_axis, std::array<double, 3> lengths);

  int dim_ = 0;
  std::size_t n_ = 0;
  std::size_t size_ = 0;
  std::array<double, 3> lengths_{0.0, 0.0, 0.0};
  double cell_volume_ = 0.0;
  std::shared_ptr<const std::array<std::vector<double>, 3>> wavenumbers_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Builds a grid with the same length L on every axis.
/// Throws std::invalid_argument for dim outside {1,2,3}, odd N, N < 8, or L <= 0.
Grid make_grid(int dim, std::size_t points_per_axis, double box_length);

/// Per-axis lengths; entries beyond `dim` are ignored.
Grid make_grid(int dim, std::size_t points_per_axis, std::array<double, 3> lengths);

}  // namespace qhd
