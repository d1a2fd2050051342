#include "qhd/grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fft_plans.hpp"

namespace qhd {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

namespace detail {

FftPlans::FftPlans(int dim, std::size_t n) {
  std::array<int, 3> shape{static_cast<int>(n), static_cast<int>(n), static_cast<int>(n)};
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  fftw_complex* scratch = fftw_alloc_complex(total);
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan = fftw_plan_dft(dim, shape.data(), scratch, scratch, FFTW_FORWARD, flags);
    backward_plan = fftw_plan_dft(dim, shape.data(), scratch, scratch, FFTW_BACKWARD, flags);
  }
  fftw_free(scratch);
  if (forward_plan == nullptr || backward_plan == nullptr) {
    throw std::runtime_error("FFTW plan creation failed");
  }
}

FftPlans::~FftPlans() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_plan);
  fftw_destroy_plan(backward_plan);
}

}  // namespace detail

Grid make_grid(int dim, std::size_t points_per_axis, double box_length) {
  return make_grid(dim, points_per_axis, {box_length, box_length, box_length});
}

Grid make_grid(int dim, std::size_t points_per_axis, std::array<double, 3> lengths) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (points_per_axis < 8 || points_per_axis % 2 != 0) {
    throw std::invalid_argument("points per axis must be even and at least 8, got " +
                                std::to_string(points_per_axis));
  }
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[static_cast<std::size_t>(a)] > 0.0) || !std::isfinite(lengths[static_cast<std::size_t>(a)])) {
      throw std::invalid_argument("box length must be positive and finite");
    }
  }

  Grid g;
  g.dim_ = dim;
  g.n_ = points_per_axis;
  g.size_ = 1;
  g.cell_volume_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      g.lengths_[static_cast<std::size_t>(a)] = lengths[static_cast<std::size_t>(a)];
      g.size_ *= points_per_axis;
      g.cell_volume_ *= lengths[static_cast<std::size_t>(a)] / static_cast<double>(points_per_axis);
    } else {
      g.lengths_[static_cast<std::size_t>(a)] = 0.0;
    }
  }

  auto tables = std::make_shared<std::array<std::vector<double>, 3>>();
  const auto n = static_cast<long>(points_per_axis);
  for (int a = 0; a < dim; ++a) {
    auto& table = (*tables)[static_cast<std::size_t>(a)];
    table.resize(points_per_axis);
    const double scale = 2.0 * std::numbers::pi / lengths[static_cast<std::size_t>(a)];
    for (long i = 0; i < n; ++i) {
      const long m = i < n / 2 ? i : i - n;
      table[static_cast<std::size_t>(i)] = scale * static_cast<double>(m);
    }
  }
  g.wavenumbers_ = std::move(tables);
  g.plans_ = std::make_shared<const detail::FftPlans>(dim, points_per_axis);
  return g;
}

std::span<const double> Grid::wavenumbers(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::out_of_range("axis out of range");
  return (*wavenumbers_)[static_cast<std::size_t>(axis)];
}

double Grid::max_wavenumber(int axis) const {
  return std::numbers::pi * static_cast<double>(n_) / box_length(axis);
}

std::array<std::size_t, 3> Grid::unravel(std::size_t flat) const noexcept {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = flat % n_;
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::stride(int axis) const noexcept {
  std::size_t s = 1;
  for (int a = dim_ - 1; a > axis; --a) s *= n_;
  return s;
}

double Grid::k_squared(std::size_t flat) const noexcept {
  double k2 = 0.0;
  const auto idx = unravel(flat);
  for (int a = 0; a < dim_; ++a) {
    const double k = (*wavenumbers_)[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
    k2 += k * k;
  }
  return k2;
}

double Grid::k_component(int axis, std::size_t flat) const noexcept {
  const std::size_t i = (flat / stride(axis)) % n_;
  return (*wavenumbers_)[static_cast<std::size_t>(axis)][i];
}

bool Grid::is_nyquist(int axis, std::size_t flat) const noexcept {
  return (flat / stride(axis)) % n_ == n_ / 2;
}

const detail::FftPlans& Grid::plans() const {
  if (!plans_) throw std::logic_error("grid has not been initialised");
  return *plans_;
}

}  // namespace qhd
