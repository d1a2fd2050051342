#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhd/field.hpp"
#include "qhd/physics.hpp"

namespace qhd {

/// Raised when a substep produces non-finite values.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(std::string substep, double t)
      : std::runtime_error("non-finite wave function after substep '" + substep + "' at t = " + std::to_string(t)),
        substep_(std::move(substep)),
        t_(t) {}
  const std::string& substep() const noexcept { return substep_; }
  double time() const noexcept { return t_; }

 private:
  std::string substep_;
  double t_;
};

/// Enables the two halves of the splitting independently (test harness use).
struct SplitFlags {
  bool kinetic = true;
  bool potential = true;
  /// Zero modes with |k_a| > 2/3 k_max on any axis in every kinetic step.
  bool dealias = false;
};

/// Self-consistent electrostatic potential of |psi|^2 (jellium gauge, optional doping).
RealField electrostatic_potential(const ComplexField& psi, const PhysicsParams& params);

/// The extra potential g evaluated on `state`.
RealField g_field(const WaveState& state, const PhysicsParams& params);

/// max |g| / (1 + |sqrt rho|^4 + |Lambda|^{4/3} + |grad sqrt rho|^{4/3}) over the grid.
double g_growth_ratio(const WaveState& state, const PhysicsParams& params);

/// Total multiplicative potential |psi|^{p-1} + V + g.
RealField total_potential(const WaveState& state, const PhysicsParams& params);

/// Second-order Strang splitting: half potential step, full kinetic step,
/// half potential step, with V re-solved from |psi|^2 before each potential half.
///
/// The kinetic propagator for the stepper's dt is computed once. When g does
/// not depend on the phase, the potential of the closing half step is reused
/// as the opening potential of the next step (|psi| is unchanged in between).
class StrangStepper {
 public:
  StrangStepper(const Grid& grid, double dt, const PhysicsParams& params, SplitFlags flags = {});

  /// Advances `state` by dt in place. Throws StepFailure on non-finite output.
  /// The cached potential is only reused when `state.t` equals the time this
  /// stepper last left it at.
  void step(WaveState& state);

  double dt() const noexcept { return dt_; }

 private:
  void potential_half(WaveState& state, const char* name);

  Grid grid_;
  double dt_;
  PhysicsParams params_;
  SplitFlags flags_;
  std::vector<Complex> kinetic_;
  std::optional<RealField> cached_potential_;
  double cached_time_ = 0.0;
  bool potential_depends_on_phase_;
};

WaveState strang_step(const WaveState& state, double dt, const PhysicsParams& params, SplitFlags flags = {});

struct StripDiagnostics {
  std::vector<double> times;
  std::vector<double> masses;
  std::vector<double> energies;
};

struct StripResult {
  WaveState state;
  StripDiagnostics diagnostics;
  /// Interior states every `snapshot_stride` substeps (strip end excluded).
  std::vector<WaveState> snapshots;
};

/// Evolves one strip of length tau with substep dt; tau/dt must be a positive
/// integer (relative tolerance 1e-9). `snapshot_stride` = 0 stores no snapshots.
StripResult evolve_strip(const WaveState& state, double tau, double dt, const PhysicsParams& params,
                         std::size_t snapshot_stride = 0, bool sample_energy = true, SplitFlags flags = {});

/// Number of substeps n with n * dt = tau; throws std::invalid_argument otherwise.
std::size_t substep_count(double tau, double dt);

struct EnergyBreakdown {
  double kinetic = 0.0;          ///< int hbar^2/2 |grad psi|^2
  double internal = 0.0;         ///< int 2/(p+1) |psi|^{p+1}
  double electrostatic = 0.0;    ///< 1/2 int |grad V|^2
  double electrostatic_by_parts = 0.0;  ///< 1/2 int V (rho - C - mean)

  double total() const noexcept { return kinetic + internal + electrostatic; }
};

EnergyBreakdown schrodinger_energy(const WaveState& state, const PhysicsParams& params);

/// Cell-volume-weighted sum of |psi|^2.
double mass(const WaveState& state);

}  // namespace qhd
