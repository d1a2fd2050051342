#include "qhd/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace qhd {

std::string to_string(GKind kind) {
  switch (kind) {
    case GKind::none:
      return "none";
    case GKind::density:
      return "density";
    case GKind::lambda_smoothed:
      return "lambda_smoothed";
  }
  return "none";
}

GKind g_kind_from_string(const std::string& name) {
  if (name == "none") return GKind::none;
  if (name == "density") return GKind::density;
  if (name == "lambda_smoothed") return GKind::lambda_smoothed;
  throw std::invalid_argument("unknown g specification '" + name + "'");
}

void PhysicsParams::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be positive");
  if (!(p >= 1.0 && p < 5.0)) throw std::invalid_argument("exponent p must lie in [1, 5)");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be non-negative");
  if (epsilon_relax && !(*epsilon_relax > 0.0)) throw std::invalid_argument("relaxation time must be positive");
  if (g.kind == GKind::lambda_smoothed && g.smoothing_width < 0.0) {
    throw std::invalid_argument("smoothing width must be non-negative");
  }
}

}  // namespace qhd
