#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhd/fractional.hpp"
#include "qhd/grid.hpp"
#include "qhd/norms.hpp"
#include "qhd/physics.hpp"

namespace qhd::harness {

/// Process exit status of the command-line driver.
enum class ExitCode : int {
  pass = 0,
  diagnostic_failure = 1,
  config_error = 2,
  runtime_failure = 3,
};

/// One code per rejected condition.
enum class ConfigErrorCode : int {
  parse = 10,
  unknown_key,
  bad_type,
  bad_override,
  grid_dim,
  grid_points,
  box_length,
  hbar,
  pressure_exponent,
  alpha,
  epsilon,
  damping,
  time_step,
  strip_length,
  strip_ratio,
  final_time,
  initial_condition,
  g_spec,
  doping,
  snapshots,
  diagnostics,
  threads,
  environment,
};

std::string to_string(ConfigErrorCode code);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ConfigErrorCode code() const noexcept { return code_; }

 private:
  ConfigErrorCode code_;
};

/// Environment variable naming the directory relative output paths resolve against.
inline constexpr const char* kOutputRootEnv = "QHD_OUTPUT_ROOT";
/// Environment variable overriding the worker/thread count.
inline constexpr const char* kThreadsEnv = "QHD_THREADS";

/// Periodic 1D profile family mean + amplitude * shape(2 pi m.x / L), shape in
/// {constant, cos, sin}.
struct Profile {
  std::string shape = "constant";
  double mean = 1.0;
  double amplitude = 0.0;
  std::array<int, 3> mode{1, 0, 0};
};

struct InitialSpec {
  /// plane_wave, gaussian, wkb, vortex or zero.
  std::string kind = "gaussian";
  double amplitude = 1.0;
  /// Gaussian width; unset means L/16 on the first axis.
  std::optional<double> sigma;
  /// Gaussian centre; unset means the box centre.
  std::optional<std::array<double, 3>> center;
  /// Plane-wave or Gaussian carrier wavevector.
  std::array<double, 3> wavevector{0.0, 0.0, 0.0};
  Profile rho;
  Profile phase{"constant", 0.0, 0.0, {1, 0, 0}};
  int charge = 1;
};

/// Separable cosine-bump test function placed relative to the box and run
/// length: centres and radii are fractions of L and T.
struct TestFunctionSpec {
  double time_center = 0.5;
  double time_radius = 0.35;
  std::array<double, 3> center{0.525, 0.5, 0.5};
  std::array<double, 3> radius{0.2, 0.2, 0.2};
  int power = 6;
  std::array<double, 3> direction{1.0, 0.0, 0.0};

  TestFunction scalar(const Grid& grid, double final_time) const;
  TestFunction vector(const Grid& grid, double final_time) const;
};

struct DiagnosticsSpec {
  bool ledger = true;
  double ledger_tolerance = 1e-8;  ///< relative to E0
  double mass_tolerance = 1e-10;
  double energy_equivalence_tolerance = 1e-8;
  double rho_continuity_tolerance = 1e-14;
  bool residuals = true;
  bool monitors = true;
  TestFunctionSpec test_function;
  std::vector<std::pair<Exponent, Exponent>> strichartz_pairs;
};

struct DopingSpec {
  /// none, constant or cos: C = mean + amplitude cos(2 pi m.x / L).
  std::string kind = "none";
  double mean = 0.0;
  double amplitude = 0.0;
  std::array<int, 3> mode{1, 0, 0};
};

struct RunConfig {
  int dim = 1;
  std::size_t points = 256;
  std::array<double, 3> box_length{20.0, 20.0, 20.0};

  double hbar = 1.0;
  double p = 3.0;
  double alpha = 1.0;
  std::optional<double> epsilon;
  GSpec g;
  DopingSpec doping;

  double tau = 0.05;
  double dt = 0.05 / 16;
  double final_time = 1.0;

  InitialSpec initial;

  std::string output_dir = "run";
  bool overwrite = false;
  bool dump_fields = false;

  SnapshotPolicy snapshots = SnapshotPolicy::boundaries;
  std::size_t snapshot_stride = 1;
  BranchPolicy branch = BranchPolicy::adaptive;
  bool dealias = false;
  std::optional<double> delta_vac;

  DiagnosticsSpec diagnostics;
  std::uint64_t seed = 1;
  int threads = 1;

  /// Non-fatal adjustments made while loading (e.g. T rounded up to whole strips).
  std::vector<std::string> warnings;

  Grid grid() const;
  /// PhysicsParams on `grid` (the doping profile needs it).
  PhysicsParams physics(const Grid& grid) const;
  DriverOptions driver_options() const;
  std::size_t strip_count() const;
  /// Output directory, relative paths resolved against $QHD_OUTPUT_ROOT.
  std::filesystem::path resolved_output_dir() const;
};

/// The full configuration tree with every key and its default.
nlohmann::json default_config_json();

nlohmann::json to_json(const RunConfig& config);

/// Builds and validates a config from a (possibly partial) tree; keys absent
/// from the defaults are rejected.
RunConfig config_from_json(const nlohmann::json& tree);

/// Parses `--a.b=value` or `--a.b value` pairs. Values are read as JSON when
/// they parse, otherwise as strings.
std::vector<std::pair<std::string, nlohmann::json>> parse_overrides(const std::vector<std::string>& args);

/// Sets a dotted key in `tree`; the key must exist in the defaults.
void apply_override(nlohmann::json& tree, const std::string& dotted_key, const nlohmann::json& value);

/// File (may be empty) + overrides + environment -> validated config.
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::pair<std::string, nlohmann::json>>& overrides = {},
                      bool apply_environment = true);

/// Throws ConfigError for every violated invariant; may append warnings.
void validate(RunConfig& config);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace qhd::harness
