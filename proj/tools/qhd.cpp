// qhd: command-line driver for fractional-step QHD runs.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhd/harness/config.hpp"
#include "qhd/harness/experiment.hpp"
#include "qhd/harness/io.hpp"
#include "qhd/harness/studies.hpp"
#include "qhd/nls.hpp"
#include "qhd/polar.hpp"
#include "qhd/verification.hpp"

namespace fs = std::filesystem;
using namespace qhd;
using namespace qhd::harness;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

struct Common {
  std::optional<std::string> config_file;
  bool force = false;
  bool print_config = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_file, "JSON config file");
  sub->add_flag("-f,--force", c.force, "allow writing into a non-empty output directory");
  sub->add_flag("--print-config", c.print_config, "print the resolved config and exit");
  sub->allow_extras();
  sub->footer("Any config key can be set with --<dotted.key>=<value>, e.g. --grid.points=256.");
}

RunConfig resolve(const Common& c, CLI::App* sub) {
  auto overrides = parse_overrides(sub->remaining());
  std::optional<fs::path> file;
  if (c.config_file) file = *c.config_file;
  RunConfig cfg = load_config(file, overrides);
  if (c.force) cfg.overwrite = true;
  for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  return cfg;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(ConfigErrorCode::bad_override, "bad " + what + " value '" + item + "'");
    }
  }
  return out;
}

void print_diagnostics(const RunManifest& m) {
  for (const DiagnosticResult& d : m.diagnostics) {
    std::cout << "  " << std::left << std::setw(24) << d.name << std::setw(8) << d.status << std::setprecision(6)
              << d.value;
    if (d.status == "pass" || d.status == "fail") std::cout << " (<= " << d.threshold << ")";
    if (!d.detail.empty()) std::cout << "  " << d.detail;
    std::cout << '\n';
  }
}

int cmd_run(const Common& common, CLI::App* sub) {
  const RunConfig cfg = resolve(common, sub);
  if (common.print_config) {
    std::cout << to_json(cfg).dump(2) << '\n';
    return 0;
  }
  const ExperimentResult r = run_experiment(cfg);
  std::cout << "run " << r.manifest.config_hash << " -> " << r.output_dir.string() << " [" << r.manifest.status << "]\n";
  if (!r.manifest.failure.empty()) std::cerr << "failure: " << r.manifest.failure << '\n';
  print_diagnostics(r.manifest);
  return code(r.exit_code());
}

int cmd_sweep_tau(const Common& common, CLI::App* sub, const std::string& taus) {
  const RunConfig cfg = resolve(common, sub);
  if (common.print_config) {
    std::cout << to_json(cfg).dump(2) << '\n';
    return 0;
  }
  const fs::path dir = cfg.resolved_output_dir();
  prepare_output_dir(dir, cfg.overwrite);
  const TauStudyReport rep = tau_convergence_study(cfg, parse_list(taus, "tau"));
  const std::string table = tau_study_table(rep);
  write_text_file(dir / "tau_study.dat", table, cfg.overwrite);
  write_json_file(dir / "config.json", to_json(cfg), cfg.overwrite);
  std::cout << table;
  const bool ledger_ok = std::all_of(rep.rows.begin(), rep.rows.end(), [](const TauStudyRow& r) { return r.ledger_pass; });
  return code(ledger_ok ? ExitCode::pass : ExitCode::diagnostic_failure);
}

int cmd_sweep_epsilon(const Common& common, CLI::App* sub, const std::string& eps) {
  const RunConfig cfg = resolve(common, sub);
  if (common.print_config) {
    std::cout << to_json(cfg).dump(2) << '\n';
    return 0;
  }
  const fs::path dir = cfg.resolved_output_dir();
  prepare_output_dir(dir, cfg.overwrite);
  const RelaxationReport rep = relaxation_sweep(cfg, parse_list(eps, "epsilon"));
  const std::string table = relaxation_table(rep);
  write_text_file(dir / "relaxation.dat", table, cfg.overwrite);
  write_json_file(dir / "config.json", to_json(cfg), cfg.overwrite);
  std::cout << table;
  return 0;
}

// Re-checks stored field dumps of a run directory against the config echoed
// in its manifest.
int cmd_verify(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const nlohmann::json manifest = read_json_file(dir / "manifest.json");
  RunConfig cfg = config_from_json(manifest.at("config"));
  const Grid grid = cfg.grid();
  const PhysicsParams params = cfg.physics(grid);
  const fs::path fields = dir / "fields";
  if (!fs::is_directory(fields)) throw OutputError(fields.string() + " missing (run with --output.dump_fields=true)");

  std::map<int, std::pair<std::optional<WaveState>, std::optional<WaveState>>> pairs;
  for (const auto& entry : fs::directory_iterator(fields)) {
    const std::string name = entry.path().filename().string();
    int k = 0;
    char side[8] = {};
    if (std::sscanf(name.c_str(), "psi_%d_%5[a-z].bin", &k, side) != 2) continue;
    WaveState s = read_field_dump(entry.path());
    if (!(s.grid() == grid)) throw OutputError(name + ": grid differs from the manifest config");
    (std::string(side) == "minus" ? pairs[k].first : pairs[k].second) = std::move(s);
  }
  if (pairs.empty()) throw OutputError("no field dumps in " + fields.string());

  const DiagnosticsSpec& d = cfg.diagnostics;
  double m0 = -1.0;
  double mass_drift = 0.0;
  double equivalence = 0.0;
  double continuity = 0.0;
  double null_form = 0.0;
  double irrot = 0.0;
  std::size_t vacuum_free = 0;
  for (const auto& [k, pr] : pairs) {
    for (const auto* s : {&pr.first, &pr.second}) {
      if (!*s) continue;
      const WaveState& st = **s;
      const double m = mass(st);
      if (m0 < 0.0) m0 = m;
      mass_drift = std::max(mass_drift, std::abs(m - m0) / (m0 > 0.0 ? m0 : 1.0));
      const HydroFields h = hydrodynamic_fields(st, cfg.delta_vac);
      const double eq = qhd_energy(h, electrostatic_potential(st.psi, params), params.p, st.hbar).total();
      const double es = schrodinger_energy(st, params).total();
      equivalence = std::max(equivalence, std::abs(eq - es) / std::max(std::abs(es), 1e-300));
      const PolarData pd = polar_factor(st.psi, cfg.delta_vac);
      if (std::none_of(pd.vacuum_mask.begin(), pd.vacuum_mask.end(), [](bool b) { return b; })) {
        ++vacuum_free;
        null_form = std::max(null_form, null_form_residual(st, cfg.delta_vac));
        irrot = std::max(irrot, irrotationality_residual(h));
      }
    }
    if (pr.first && pr.second) {
      double max_rho = 0.0;
      double diff = 0.0;
      for (std::size_t i = 0; i < pr.first->psi.size(); ++i) {
        const double a = std::norm(pr.first->psi[i]);
        max_rho = std::max(max_rho, a);
        diff = std::max(diff, std::abs(a - std::norm(pr.second->psi[i])));
      }
      if (max_rho > 0.0) continuity = std::max(continuity, diff / max_rho);
    }
  }

  bool ok = true;
  auto line = [&](const std::string& name, double v, double tol) {
    const bool pass = v <= tol;
    ok = ok && pass;
    std::cout << "  " << std::left << std::setw(22) << name << (pass ? "pass    " : "fail    ") << std::setprecision(6) << v
              << " (<= " << tol << ")\n";
  };
  std::cout << "verify " << dir.string() << ": " << pairs.size() << " boundaries\n";
  line("mass_drift", mass_drift, d.mass_tolerance);
  line("energy_equivalence", equivalence, d.energy_equivalence_tolerance);
  line("rho_continuity", continuity, d.rho_continuity_tolerance);
  std::cout << "  " << std::left << std::setw(22) << "null_form" << "info    " << null_form << "  (" << vacuum_free
            << " vacuum-free dumps)\n";
  std::cout << "  " << std::left << std::setw(22) << "irrotationality" << "info    " << irrot << '\n';
  return code(ok ? ExitCode::pass : ExitCode::diagnostic_failure);
}

std::vector<std::vector<double>> read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(tok == "nan" ? std::nan("") : std::stod(tok));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_export_plots(const std::string& run_dir, const std::string& out_dir, bool force) {
  const fs::path dir(run_dir);
  const fs::path out = out_dir.empty() ? dir / "plots" : fs::path(out_dir);
  prepare_output_dir(out, force);

  const auto series = read_table(dir / "timeseries.dat");
  const auto bounds = read_table(dir / "boundaries.dat");
  const auto ledger = read_table(dir / "ledger.dat");

  std::ostringstream energy, mass_file, lambda, jumps, cumulative;
  energy << "# t energy\n";
  mass_file << "# t relative_mass_drift\n";
  const double m0 = series.empty() ? 1.0 : series.front().at(2);
  for (const auto& r : series) {
    energy << r.at(0) << ' ' << r.at(3) << '\n';
    mass_file << r.at(0) << ' ' << (m0 != 0.0 ? (r.at(2) - m0) / m0 : r.at(2)) << '\n';
  }
  lambda << "# t lambda_l2_minus lambda_l2_plus\n";
  for (const auto& r : bounds) lambda << r.at(1) << ' ' << r.at(4) << ' ' << r.at(5) << '\n';
  jumps << "# k jump jump_bound\n";
  cumulative << "# k energy_plus cumulative_bound\n";
  for (const auto& r : ledger) {
    jumps << r.at(0) << ' ' << r.at(1) << ' ' << r.at(2) << '\n';
    cumulative << r.at(0) << ' ' << r.at(5) << ' ' << r.at(7) << '\n';
  }
  write_text_file(out / "energy.dat", energy.str(), force);
  write_text_file(out / "mass.dat", mass_file.str(), force);
  write_text_file(out / "lambda.dat", lambda.str(), force);
  write_text_file(out / "ledger_jumps.dat", jumps.str(), force);
  write_text_file(out / "ledger_cumulative.dat", cumulative.str(), force);
  if (fs::exists(dir / "diagnostics.dat")) {
    std::ifstream in(dir / "diagnostics.dat");
    std::stringstream ss;
    ss << in.rdbuf();
    write_text_file(out / "diagnostics.dat", ss.str(), force);
  }
  const std::string script =
      "set terminal pngcairo size 900,600\n"
      "set output 'energy.png'\nplot 'energy.dat' using 1:2 with lines title 'E(t)'\n"
      "set output 'mass.png'\nplot 'mass.dat' using 1:2 with lines title 'relative mass drift'\n"
      "set output 'lambda.png'\nplot 'lambda.dat' using 1:2 with points title '|Lambda(k tau-)|^2', "
      "'' using 1:3 with points title '|Lambda(k tau+)|^2'\n"
      "set output 'ledger.png'\nplot 'ledger_jumps.dat' using 1:2 with points title 'jump', "
      "'' using 1:3 with lines title 'bound'\n"
      "set output 'cumulative.png'\nplot 'ledger_cumulative.dat' using 1:2 with points title 'E(k tau+)', "
      "'' using 1:3 with lines title 'cumulative bound'\n";
  write_text_file(out / "plots.gp", script, force);
  std::cout << "plot data written to " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-step quantum hydrodynamics on a periodic grid"};
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + kOutputRootEnv + " (root for relative output dirs), " + kThreadsEnv +
             " (worker threads).\nExit status: 0 pass, 1 diagnostic failure, 2 config error, 3 runtime failure.");

  Common run_opts, tau_opts, eps_opts;
  CLI::App* run = app.add_subcommand("run", "run one experiment and its diagnostics");
  add_common(run, run_opts);

  std::string taus = "0.1,0.05,0.025";
  CLI::App* sweep_tau = app.add_subcommand("sweep-tau", "tau convergence study of the weak-form residuals");
  add_common(sweep_tau, tau_opts);
  sweep_tau->add_option("--taus", taus, "comma-separated geometric tau list")->capture_default_str();

  std::string eps = "1,0.5,0.25";
  CLI::App* sweep_eps = app.add_subcommand("sweep-epsilon", "relaxation-time sweep");
  add_common(sweep_eps, eps_opts);
  sweep_eps->add_option("--epsilons", eps, "comma-separated decreasing epsilon list")->capture_default_str();

  std::string verify_dir;
  CLI::App* verify = app.add_subcommand("verify", "re-run diagnostics on the field dumps of a run directory");
  verify->add_option("run_dir", verify_dir, "run directory")->required();

  std::string plot_dir;
  std::string plot_out;
  bool plot_force = false;
  CLI::App* plots = app.add_subcommand("export-plots", "write plot-ready data files and a gnuplot script");
  plots->add_option("run_dir", plot_dir, "run directory")->required();
  plots->add_option("-o,--out", plot_out, "output directory (default <run_dir>/plots)");
  plots->add_flag("-f,--force", plot_force, "overwrite existing plot files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::config_error);
  }

  try {
    if (*run) return cmd_run(run_opts, run);
    if (*sweep_tau) return cmd_sweep_tau(tau_opts, sweep_tau, taus);
    if (*sweep_eps) return cmd_sweep_epsilon(eps_opts, sweep_eps, eps);
    if (*verify) return cmd_verify(verify_dir);
    if (*plots) return cmd_export_plots(plot_dir, plot_out, plot_force);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return code(ExitCode::config_error);
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return code(ExitCode::runtime_failure);
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return code(ExitCode::runtime_failure);
  }
  return code(ExitCode::runtime_failure);
}
