#include "qhd/harness/initial_conditions.hpp"

#include <cmath>
#include <numbers>

#include "qhd/nls.hpp"

namespace qhd::harness {

namespace {

constexpr double kPi = std::numbers::pi;

double profile_at(const Profile& p, const Grid& g, const std::array<std::size_t, 3>& idx) {
  if (p.shape == "constant") return p.mean;
  double arg = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto au = static_cast<std::size_t>(a);
    arg += 2.0 * kPi * p.mode[au] * g.coordinate(a, idx[au]) / g.box_length(a);
  }
  return p.mean + p.amplitude * (p.shape == "cos" ? std::cos(arg) : std::sin(arg));
}

double minimum_image(double d, double L) { return d - L * std::round(d / L); }

void fail(const std::string& message) { throw ConfigError(ConfigErrorCode::initial_condition, message); }

}  // namespace

InitialCondition build_initial_condition(const Grid& g, const InitialSpec& spec, const PhysicsParams& params) {
  WaveState s{ComplexField(g), 0.0, params.hbar};
  const int dim = g.dim();

  if (spec.kind == "plane_wave") {
    std::array<int, 3> m{};
    for (int a = 0; a < dim; ++a) {
      const auto au = static_cast<std::size_t>(a);
      const double r = spec.wavevector[au] * g.box_length(a) / (2.0 * kPi);
      if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, std::abs(r))) fail("plane-wave wavevector is off the grid");
      m[au] = static_cast<int>(std::lround(r));
      if (std::abs(m[au]) >= static_cast<int>(g.points_per_axis() / 2)) fail("plane-wave wavevector exceeds the grid band");
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto idx = g.unravel(i);
      // Integer mode times grid index keeps the phase exact modulo 2 pi.
      long long ph = 0;
      for (int a = 0; a < dim; ++a) ph += static_cast<long long>(m[static_cast<std::size_t>(a)]) * static_cast<long long>(idx[static_cast<std::size_t>(a)]);
      const auto n = static_cast<long long>(g.points_per_axis());
      ph = ((ph % n) + n) % n;
      s.psi[i] = std::polar(spec.amplitude, 2.0 * kPi * static_cast<double>(ph) / static_cast<double>(n));
    }
  } else if (spec.kind == "gaussian") {
    const double sigma = spec.sigma.value_or(g.box_length(0) / 16.0);
    for (int a = 0; a < dim; ++a) {
      if (!(sigma > 0.0) || sigma > g.box_length(a) / 12.0 * (1.0 + 1e-12)) fail("Gaussian width must lie in (0, L/12]");
    }
    std::array<double, 3> c{};
    for (int a = 0; a < dim; ++a) {
      c[static_cast<std::size_t>(a)] = spec.center ? (*spec.center)[static_cast<std::size_t>(a)] : 0.5 * g.box_length(a);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto idx = g.unravel(i);
      double r2 = 0.0;
      double ph = 0.0;
      for (int a = 0; a < dim; ++a) {
        const auto au = static_cast<std::size_t>(a);
        const double d = minimum_image(g.coordinate(a, idx[au]) - c[au], g.box_length(a));
        r2 += d * d;
        ph += spec.wavevector[au] * d;
      }
      s.psi[i] = std::polar(spec.amplitude * std::exp(-r2 / (2.0 * sigma * sigma)), ph);
    }
  } else if (spec.kind == "wkb") {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto idx = g.unravel(i);
      const double rho = profile_at(spec.rho, g, idx);
      if (rho < 0.0) fail("WKB density profile is negative");
      s.psi[i] = std::polar(std::sqrt(rho), profile_at(spec.phase, g, idx) / params.hbar);
    }
  } else if (spec.kind == "vortex") {
    if (dim != 2) fail("vortex initial data need a 2D grid");
    if (spec.charge == 0) fail("vortex charge must be non-zero");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto idx = g.unravel(i);
      const Complex z{std::sin(2.0 * kPi * g.coordinate(0, idx[0]) / g.box_length(0)),
                      std::sin(2.0 * kPi * g.coordinate(1, idx[1]) / g.box_length(1))};
      const Complex w = spec.charge > 0 ? z : std::conj(z);
      Complex v = 1.0;
      for (int k = 0; k < std::abs(spec.charge); ++k) v *= w;
      s.psi[i] = spec.amplitude * v;
    }
  } else if (spec.kind != "zero") {
    fail("unknown initial condition '" + spec.kind + "'");
  }

  InitialCondition out{std::move(s), 0.0, 0.0};
  out.mass = mass(out.state);
  out.energy = schrodinger_energy(out.state, params).total();
  return out;
}

InitialCondition build_initial_condition(const RunConfig& config) {
  const Grid g = config.grid();
  return build_initial_condition(g, config.initial, config.physics(g));
}

}  // namespace qhd::harness
