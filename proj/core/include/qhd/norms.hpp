#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qhd/fractional.hpp"
#include "qhd/test_function.hpp"

namespace qhd {

/// Lebesgue exponent num/den in lowest terms, or infinity.
struct Exponent {
  std::int64_t num = 2;
  std::int64_t den = 1;
  bool infinite = false;

  static Exponent rational(std::int64_t num, std::int64_t den = 1);
  static Exponent infinity();
  double value() const noexcept {
    return infinite ? std::numeric_limits<double>::infinity() : static_cast<double>(num) / static_cast<double>(den);
  }
  std::string to_string() const;
  friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Exact check of Strichartz admissibility in dimension `dim`:
/// 2/q + dim/r = dim/2 with 2 <= q <= inf and 2 <= r <= 2 dim/(dim - 2)
/// (r < inf in 2D, the endpoint q = 2 excluded in 2D).
bool admissible_pair_check(const Exponent& q, const Exponent& r, int dim = 3);

/// One sampled pointwise magnitude at time t.
struct TimedField {
  double t = 0.0;
  int strip = 0;
  RealField magnitude;
};

struct NormReport {
  Exponent q;
  Exponent r;
  double value = 0.0;
  /// L^q_t L^r_x norm restricted to each strip, indexed by strip.
  std::vector<double> per_strip;
  bool admissible = false;
  std::string warning;
};

/// ||f||_{L^q_t L^r_x}: discrete L^r in space per sample, trapezoid (or max
/// for q = inf) in time. Samples must be ordered by time; at least two are
/// needed for finite q.
NormReport mixed_norm(const std::vector<TimedField>& samples, const Exponent& q, const Exponent& r);

/// Mixed norms of |grad psi| over the trajectory for every pair. Needs substep
/// snapshots (throws std::invalid_argument otherwise). Warns when dim != 3.
std::vector<NormReport> strichartz_monitor(const Trajectory& traj,
                                           const std::vector<std::pair<Exponent, Exponent>>& pairs);

/// int int chi^2 |(I - Laplacian)^{1/4} grad psi|^2 dx dt, trapezoid in time.
double local_smoothing_norm(const Trajectory& traj, const TestFunction& window);

}  // namespace qhd
