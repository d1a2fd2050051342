#include "qhd/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qhd::harness {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string snapshot_name(SnapshotPolicy s) { return s == SnapshotPolicy::substeps ? "substeps" : "boundaries"; }
std::string branch_name(BranchPolicy b) { return b == BranchPolicy::fixed ? "fixed" : "adaptive"; }

Exponent parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return Exponent::infinity();
  const auto slash = s.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const long long n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Exponent::rational(n, 1);
    }
    const std::string a = s.substr(0, slash);
    const std::string b = s.substr(slash + 1);
    const long long n = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const long long d = std::stoll(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return Exponent::rational(n, d);
  } catch (const std::exception&) {
    throw ConfigError(ConfigErrorCode::diagnostics, "bad exponent '" + s + "' (expected an integer, n/d or inf)");
  }
}

json profile_json(const Profile& p) {
  return {{"shape", p.shape}, {"mean", p.mean}, {"amplitude", p.amplitude}, {"mode", p.mode}};
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Recursive merge of `patch` into `base`, rejecting keys `base` lacks.
void merge(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ConfigError(ConfigErrorCode::bad_type, "expected a table at '" + prefix + "'");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError(ConfigErrorCode::unknown_key, "unknown config key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object()) {
      merge(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json& node(const std::string& dotted) const {
    const json* cur = &root_;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) cur = &cur->at(part);
    return *cur;
  }

  template <class T>
  T get(const std::string& dotted) const {
    const json& n = node(dotted);
    bool ok = false;
    if constexpr (std::is_same_v<T, double>) {
      ok = n.is_number();
    } else if constexpr (std::is_same_v<T, bool>) {
      ok = n.is_boolean();
    } else if constexpr (std::is_same_v<T, std::string>) {
      ok = n.is_string();
    } else if constexpr (std::is_unsigned_v<T>) {
      ok = n.is_number_unsigned() || (n.is_number_integer() && n.get<long long>() >= 0);
    } else {
      ok = n.is_number_integer();
    }
    if (!ok) throw ConfigError(ConfigErrorCode::bad_type, "config key '" + dotted + "' has the wrong type: " + n.dump());
    return n.get<T>();
  }

  template <class T>
  std::optional<T> optional(const std::string& dotted) const {
    if (node(dotted).is_null()) return std::nullopt;
    return get<T>(dotted);
  }

  template <class T>
  std::array<T, 3> triple(const std::string& dotted) const {
    const json& n = node(dotted);
    if (!n.is_array() || n.size() != 3) {
      throw ConfigError(ConfigErrorCode::bad_type, "config key '" + dotted + "' must be a list of three numbers");
    }
    std::array<T, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (std::is_integral_v<T> ? !n[i].is_number_integer() : !n[i].is_number()) {
        throw ConfigError(ConfigErrorCode::bad_type, "config key '" + dotted + "' must hold numbers");
      }
      out[i] = n[i].get<T>();
    }
    return out;
  }

  Profile profile(const std::string& dotted) const {
    return {get<std::string>(dotted + ".shape"), get<double>(dotted + ".mean"), get<double>(dotted + ".amplitude"),
            triple<int>(dotted + ".mode")};
  }

 private:
  const json& root_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require(bool ok, ConfigErrorCode code, const std::string& message) {
  if (!ok) throw ConfigError(code, message);
}

double profile_value(const Profile& p, const Grid& g, std::size_t flat) {
  if (p.shape == "constant") return p.mean;
  const auto idx = g.unravel(flat);
  double arg = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto au = static_cast<std::size_t>(a);
    arg += 2.0 * kPi * p.mode[au] * g.coordinate(a, idx[au]) / g.box_length(a);
  }
  return p.mean + p.amplitude * (p.shape == "cos" ? std::cos(arg) : std::sin(arg));
}

void validate_profile(const Profile& p, const std::string& name, bool nonnegative) {
  require(p.shape == "constant" || p.shape == "cos" || p.shape == "sin", ConfigErrorCode::initial_condition,
          name + ".shape must be constant, cos or sin");
  require(std::isfinite(p.mean) && std::isfinite(p.amplitude), ConfigErrorCode::initial_condition,
          name + " must be finite");
  if (nonnegative) {
    const double lo = p.shape == "constant" ? p.mean : p.mean - std::abs(p.amplitude);
    require(lo >= 0.0, ConfigErrorCode::initial_condition, name + " must be non-negative");
  }
}

}  // namespace

std::string to_string(ConfigErrorCode code) {
  switch (code) {
    case ConfigErrorCode::parse: return "parse";
    case ConfigErrorCode::unknown_key: return "unknown_key";
    case ConfigErrorCode::bad_type: return "bad_type";
    case ConfigErrorCode::bad_override: return "bad_override";
    case ConfigErrorCode::grid_dim: return "grid_dim";
    case ConfigErrorCode::grid_points: return "grid_points";
    case ConfigErrorCode::box_length: return "box_length";
    case ConfigErrorCode::hbar: return "hbar";
    case ConfigErrorCode::pressure_exponent: return "pressure_exponent";
    case ConfigErrorCode::alpha: return "alpha";
    case ConfigErrorCode::epsilon: return "epsilon";
    case ConfigErrorCode::damping: return "damping";
    case ConfigErrorCode::time_step: return "time_step";
    case ConfigErrorCode::strip_length: return "strip_length";
    case ConfigErrorCode::strip_ratio: return "strip_ratio";
    case ConfigErrorCode::final_time: return "final_time";
    case ConfigErrorCode::initial_condition: return "initial_condition";
    case ConfigErrorCode::g_spec: return "g_spec";
    case ConfigErrorCode::doping: return "doping";
    case ConfigErrorCode::snapshots: return "snapshots";
    case ConfigErrorCode::diagnostics: return "diagnostics";
    case ConfigErrorCode::threads: return "threads";
    case ConfigErrorCode::environment: return "environment";
  }
  return "unknown";
}

TestFunction TestFunctionSpec::scalar(const Grid& grid, double final_time) const {
  std::array<double, 3> c{};
  std::array<double, 3> r{1.0, 1.0, 1.0};
  for (int a = 0; a < grid.dim(); ++a) {
    const auto au = static_cast<std::size_t>(a);
    c[au] = center[au] * grid.box_length(a);
    r[au] = radius[au] * grid.box_length(a);
  }
  return TestFunction::bump(time_center * final_time, time_radius * final_time, c, r, power);
}

TestFunction TestFunctionSpec::vector(const Grid& grid, double final_time) const {
  return scalar(grid, final_time).with_direction(direction);
}

Grid RunConfig::grid() const { return make_grid(dim, points, box_length); }

PhysicsParams RunConfig::physics(const Grid& grid) const {
  PhysicsParams params;
  params.hbar = hbar;
  params.p = p;
  params.alpha = alpha;
  params.g = g;
  params.epsilon_relax = epsilon;
  if (doping.kind != "none") {
    const Profile prof{doping.kind == "cos" ? "cos" : "constant", doping.mean, doping.amplitude, doping.mode};
    RealField c(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) c[i] = profile_value(prof, grid, i);
    params.doping = std::move(c);
  }
  return params;
}

DriverOptions RunConfig::driver_options() const {
  DriverOptions o;
  o.snapshots = snapshots;
  o.snapshot_stride = snapshot_stride;
  o.branch = branch;
  o.delta_vac = delta_vac;
  o.dealias = dealias;
  return o;
}

std::size_t RunConfig::strip_count() const {
  return static_cast<std::size_t>(std::ceil(final_time / tau - 1e-9));
}

std::filesystem::path RunConfig::resolved_output_dir() const {
  std::filesystem::path dir(output_dir);
  if (dir.is_absolute()) return dir;
  if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
    return std::filesystem::path(root) / dir;
  }
  return dir;
}

json to_json(const RunConfig& c) {
  json pairs = json::array();
  for (const auto& [q, r] : c.diagnostics.strichartz_pairs) pairs.push_back({q.to_string(), r.to_string()});
  const InitialSpec& ic = c.initial;
  const TestFunctionSpec& tf = c.diagnostics.test_function;
  return {
      {"grid", {{"dim", c.dim}, {"points", c.points}, {"length", c.box_length}}},
      {"physics",
       {{"hbar", c.hbar},
        {"p", c.p},
        {"alpha", c.alpha},
        {"epsilon", optional_json(c.epsilon)},
        {"g", {{"kind", to_string(c.g.kind)}, {"coefficient", c.g.coefficient}, {"width", c.g.smoothing_width}}},
        {"doping",
         {{"kind", c.doping.kind}, {"mean", c.doping.mean}, {"amplitude", c.doping.amplitude}, {"mode", c.doping.mode}}}}},
      {"time", {{"tau", c.tau}, {"dt", c.dt}, {"final", c.final_time}}},
      {"initial",
       {{"kind", ic.kind},
        {"amplitude", ic.amplitude},
        {"sigma", optional_json(ic.sigma)},
        {"center", optional_json(ic.center)},
        {"wavevector", ic.wavevector},
        {"rho", profile_json(ic.rho)},
        {"phase", profile_json(ic.phase)},
        {"charge", ic.charge}}},
      {"output", {{"dir", c.output_dir}, {"overwrite", c.overwrite}, {"dump_fields", c.dump_fields}}},
      {"snapshots", {{"policy", snapshot_name(c.snapshots)}, {"stride", c.snapshot_stride}}},
      {"numerics", {{"branch", branch_name(c.branch)}, {"dealias", c.dealias}, {"delta_vac", optional_json(c.delta_vac)}}},
      {"diagnostics",
       {{"ledger", c.diagnostics.ledger},
        {"ledger_tolerance", c.diagnostics.ledger_tolerance},
        {"mass_tolerance", c.diagnostics.mass_tolerance},
        {"energy_equivalence_tolerance", c.diagnostics.energy_equivalence_tolerance},
        {"rho_continuity_tolerance", c.diagnostics.rho_continuity_tolerance},
        {"residuals", c.diagnostics.residuals},
        {"monitors", c.diagnostics.monitors},
        {"strichartz_pairs", pairs},
        {"test_function",
         {{"time_center", tf.time_center},
          {"time_radius", tf.time_radius},
          {"center", tf.center},
          {"radius", tf.radius},
          {"power", tf.power},
          {"direction", tf.direction}}}}},
      {"seed", c.seed},
      {"threads", c.threads},
  };
}

json default_config_json() {
  RunConfig c;
  c.diagnostics.strichartz_pairs = {{Exponent::infinity(), Exponent::rational(2)},
                                    {Exponent::rational(2), Exponent::rational(6)}};
  return to_json(c);
}

RunConfig config_from_json(const json& tree) {
  json full = default_config_json();
  merge(full, tree, "");
  const Reader r(full);
  RunConfig c;
  c.dim = r.get<int>("grid.dim");
  c.points = r.get<std::size_t>("grid.points");
  {
    const json& len = r.node("grid.length");
    if (len.is_number()) {
      const double v = r.get<double>("grid.length");
      c.box_length = {v, v, v};
    } else {
      c.box_length = r.triple<double>("grid.length");
    }
  }
  c.hbar = r.get<double>("physics.hbar");
  c.p = r.get<double>("physics.p");
  c.alpha = r.get<double>("physics.alpha");
  c.epsilon = r.optional<double>("physics.epsilon");
  try {
    c.g.kind = g_kind_from_string(r.get<std::string>("physics.g.kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigErrorCode::g_spec, e.what());
  }
  c.g.coefficient = r.get<double>("physics.g.coefficient");
  c.g.smoothing_width = r.get<double>("physics.g.width");
  c.doping.kind = r.get<std::string>("physics.doping.kind");
  c.doping.mean = r.get<double>("physics.doping.mean");
  c.doping.amplitude = r.get<double>("physics.doping.amplitude");
  c.doping.mode = r.triple<int>("physics.doping.mode");
  c.tau = r.get<double>("time.tau");
  c.dt = r.get<double>("time.dt");
  c.final_time = r.get<double>("time.final");

  InitialSpec& ic = c.initial;
  ic.kind = r.get<std::string>("initial.kind");
  ic.amplitude = r.get<double>("initial.amplitude");
  ic.sigma = r.optional<double>("initial.sigma");
  if (!r.node("initial.center").is_null()) ic.center = r.triple<double>("initial.center");
  ic.wavevector = r.triple<double>("initial.wavevector");
  ic.rho = r.profile("initial.rho");
  ic.phase = r.profile("initial.phase");
  ic.charge = r.get<int>("initial.charge");

  c.output_dir = r.get<std::string>("output.dir");
  c.overwrite = r.get<bool>("output.overwrite");
  c.dump_fields = r.get<bool>("output.dump_fields");

  const std::string policy = r.get<std::string>("snapshots.policy");
  if (policy == "substeps") {
    c.snapshots = SnapshotPolicy::substeps;
  } else if (policy == "boundaries") {
    c.snapshots = SnapshotPolicy::boundaries;
  } else {
    throw ConfigError(ConfigErrorCode::snapshots, "snapshots.policy must be boundaries or substeps");
  }
  c.snapshot_stride = r.get<std::size_t>("snapshots.stride");
  const std::string branch = r.get<std::string>("numerics.branch");
  if (branch == "adaptive") {
    c.branch = BranchPolicy::adaptive;
  } else if (branch == "fixed") {
    c.branch = BranchPolicy::fixed;
  } else {
    throw ConfigError(ConfigErrorCode::bad_type, "numerics.branch must be adaptive or fixed");
  }
  c.dealias = r.get<bool>("numerics.dealias");
  c.delta_vac = r.optional<double>("numerics.delta_vac");

  DiagnosticsSpec& d = c.diagnostics;
  d.ledger = r.get<bool>("diagnostics.ledger");
  d.ledger_tolerance = r.get<double>("diagnostics.ledger_tolerance");
  d.mass_tolerance = r.get<double>("diagnostics.mass_tolerance");
  d.energy_equivalence_tolerance = r.get<double>("diagnostics.energy_equivalence_tolerance");
  d.rho_continuity_tolerance = r.get<double>("diagnostics.rho_continuity_tolerance");
  d.residuals = r.get<bool>("diagnostics.residuals");
  d.monitors = r.get<bool>("diagnostics.monitors");
  const json& pairs = r.node("diagnostics.strichartz_pairs");
  if (!pairs.is_array()) throw ConfigError(ConfigErrorCode::bad_type, "diagnostics.strichartz_pairs must be a list");
  for (const json& pr : pairs) {
    if (!pr.is_array() || pr.size() != 2) {
      throw ConfigError(ConfigErrorCode::bad_type, "each Strichartz pair must be a two-element list");
    }
    auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    d.strichartz_pairs.emplace_back(parse_exponent(text(pr[0])), parse_exponent(text(pr[1])));
  }
  TestFunctionSpec& tf = d.test_function;
  tf.time_center = r.get<double>("diagnostics.test_function.time_center");
  tf.time_radius = r.get<double>("diagnostics.test_function.time_radius");
  tf.center = r.triple<double>("diagnostics.test_function.center");
  tf.radius = r.triple<double>("diagnostics.test_function.radius");
  tf.power = r.get<int>("diagnostics.test_function.power");
  tf.direction = r.triple<double>("diagnostics.test_function.direction");

  c.seed = r.get<std::uint64_t>("seed");
  c.threads = r.get<int>("threads");
  validate(c);
  return c;
}

void validate(RunConfig& c) {
  require(c.dim >= 1 && c.dim <= 3, ConfigErrorCode::grid_dim, "grid.dim must be 1, 2 or 3");
  require(c.points >= 8 && is_power_of_two(c.points), ConfigErrorCode::grid_points,
          "grid.points must be a power of two and at least 8");
  for (int a = 0; a < c.dim; ++a) {
    const double L = c.box_length[static_cast<std::size_t>(a)];
    require(std::isfinite(L) && L > 0.0, ConfigErrorCode::box_length, "grid.length must be positive");
  }
  require(std::isfinite(c.hbar) && c.hbar > 0.0, ConfigErrorCode::hbar, "physics.hbar must be positive");
  require(c.p >= 1.0 && c.p < 5.0, ConfigErrorCode::pressure_exponent, "physics.p must lie in [1, 5)");
  require(std::isfinite(c.alpha) && c.alpha >= 0.0, ConfigErrorCode::alpha, "physics.alpha must be non-negative");
  if (c.epsilon) {
    require(std::isfinite(*c.epsilon) && *c.epsilon > 0.0, ConfigErrorCode::epsilon, "physics.epsilon must be positive");
  }
  require(std::isfinite(c.dt) && c.dt > 0.0, ConfigErrorCode::time_step, "time.dt must be positive");
  require(std::isfinite(c.final_time) && c.final_time > 0.0, ConfigErrorCode::final_time,
          "time.final must be positive");
  require(std::isfinite(c.tau) && c.tau > 0.0 && c.tau <= c.final_time * (1.0 + 1e-12), ConfigErrorCode::strip_length,
          "time.tau must lie in (0, time.final]");
  const double rate = c.epsilon ? c.alpha / *c.epsilon : c.alpha;
  require(rate * c.tau < 1.0, ConfigErrorCode::damping, "collision rate times tau must be below 1");
  const double ratio = c.tau / c.dt;
  require(std::round(ratio) >= 1.0 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio, ConfigErrorCode::strip_ratio,
          "time.tau must be an integer multiple of time.dt");
  const double strips = c.final_time / c.tau;
  if (std::abs(strips - std::round(strips)) > 1e-9 * strips) {
    const double rounded = static_cast<double>(c.strip_count()) * c.tau;
    c.warnings.push_back("time.final = " + std::to_string(c.final_time) + " is not a whole number of strips; rounded up to " +
                         std::to_string(rounded));
    c.final_time = rounded;
  }

  const InitialSpec& ic = c.initial;
  const Grid g = c.grid();
  require(std::isfinite(ic.amplitude), ConfigErrorCode::initial_condition, "initial.amplitude must be finite");
  if (ic.kind == "plane_wave") {
    for (int a = 0; a < c.dim; ++a) {
      const double m = ic.wavevector[static_cast<std::size_t>(a)] * g.box_length(a) / (2.0 * kPi);
      require(std::abs(m - std::round(m)) <= 1e-9 * std::max(1.0, std::abs(m)), ConfigErrorCode::initial_condition,
              "initial.wavevector is not a grid wavenumber");
      require(std::abs(std::round(m)) < static_cast<double>(c.points / 2), ConfigErrorCode::initial_condition,
              "initial.wavevector exceeds the grid band");
    }
  } else if (ic.kind == "gaussian") {
    if (ic.sigma) {
      require(*ic.sigma > 0.0, ConfigErrorCode::initial_condition, "initial.sigma must be positive");
      for (int a = 0; a < c.dim; ++a) {
        require(*ic.sigma <= g.box_length(a) / 12.0 * (1.0 + 1e-12), ConfigErrorCode::initial_condition,
                "initial.sigma must not exceed L/12");
      }
    }
  } else if (ic.kind == "wkb") {
    validate_profile(ic.rho, "initial.rho", true);
    validate_profile(ic.phase, "initial.phase", false);
  } else if (ic.kind == "vortex") {
    require(c.dim == 2, ConfigErrorCode::initial_condition, "vortex initial data need a 2D grid");
    require(ic.charge != 0, ConfigErrorCode::initial_condition, "initial.charge must be non-zero");
  } else if (ic.kind != "zero") {
    throw ConfigError(ConfigErrorCode::initial_condition,
                      "initial.kind must be plane_wave, gaussian, wkb, vortex or zero (got '" + ic.kind + "')");
  }

  require(std::isfinite(c.g.coefficient) && std::isfinite(c.g.smoothing_width) && c.g.smoothing_width >= 0.0,
          ConfigErrorCode::g_spec, "physics.g coefficient must be finite and width non-negative");
  require(c.doping.kind == "none" || c.doping.kind == "constant" || c.doping.kind == "cos", ConfigErrorCode::doping,
          "physics.doping.kind must be none, constant or cos");
  require(std::isfinite(c.doping.mean) && std::isfinite(c.doping.amplitude), ConfigErrorCode::doping,
          "physics.doping values must be finite");
  require(c.snapshot_stride >= 1, ConfigErrorCode::snapshots, "snapshots.stride must be at least 1");
  if (c.delta_vac) {
    require(*c.delta_vac > 0.0, ConfigErrorCode::snapshots, "numerics.delta_vac must be positive");
  }

  const DiagnosticsSpec& d = c.diagnostics;
  for (double tol : {d.ledger_tolerance, d.mass_tolerance, d.energy_equivalence_tolerance, d.rho_continuity_tolerance}) {
    require(std::isfinite(tol) && tol > 0.0, ConfigErrorCode::diagnostics, "diagnostic tolerances must be positive");
  }
  const TestFunctionSpec& tf = d.test_function;
  require(tf.time_radius > 0.0 && tf.power >= 4, ConfigErrorCode::diagnostics,
          "test function needs a positive time radius and power >= 4");
  for (int a = 0; a < c.dim; ++a) {
    const double r = tf.radius[static_cast<std::size_t>(a)];
    require(r > 0.0 && r <= 0.5, ConfigErrorCode::diagnostics, "test function radius must lie in (0, 0.5] of the box");
  }
  require(c.threads >= 1, ConfigErrorCode::threads, "threads must be at least 1");
}

std::vector<std::pair<std::string, json>> parse_overrides(const std::vector<std::string>& args) {
  std::vector<std::pair<std::string, json>> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() <= 2) {
      throw ConfigError(ConfigErrorCode::bad_override, "unexpected argument '" + a + "'");
    }
    std::string key = a.substr(2);
    std::string text;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      text = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw ConfigError(ConfigErrorCode::bad_override, "override '" + a + "' needs a value");
      text = args[++i];
    }
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    out.emplace_back(key, std::move(value));
  }
  return out;
}

void apply_override(json& tree, const std::string& dotted_key, const json& value) {
  static const json defaults = default_config_json();
  const json* ref = &defaults;
  json* cur = &tree;
  std::stringstream ss(dotted_key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError(ConfigErrorCode::bad_override, "empty override key");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!ref->is_object() || !ref->contains(parts[i])) {
      throw ConfigError(ConfigErrorCode::unknown_key, "unknown config key '" + dotted_key + "'");
    }
    ref = &ref->at(parts[i]);
    if (!cur->is_object()) *cur = json::object();
    cur = &(*cur)[parts[i]];
  }
  if (ref->is_object()) {
    throw ConfigError(ConfigErrorCode::bad_override, "'" + dotted_key + "' is a section, not a value");
  }
  *cur = value;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::pair<std::string, json>>& overrides, bool apply_environment) {
  json tree = json::object();
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError(ConfigErrorCode::parse, "cannot open config file " + file->string());
    tree = json::parse(in, nullptr, false, true);
    if (tree.is_discarded()) throw ConfigError(ConfigErrorCode::parse, "config file " + file->string() + " is not valid JSON");
    if (!tree.is_object()) throw ConfigError(ConfigErrorCode::parse, "config file must hold a table");
  }
  if (apply_environment) {
    if (const char* t = std::getenv(kThreadsEnv); t != nullptr && *t != '\0') {
      char* end = nullptr;
      const long v = std::strtol(t, &end, 10);
      if (*end != '\0' || v < 1) throw ConfigError(ConfigErrorCode::environment, std::string(kThreadsEnv) + " must be a positive integer");
      tree["threads"] = v;
    }
  }
  for (const auto& [key, value] : overrides) apply_override(tree, key, value);
  return config_from_json(tree);
}

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qhd::harness
