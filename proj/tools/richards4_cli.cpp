// richards4: command-line driver for the fourth-order Richards solver.
//
// Exit status: 0 all checks pass, 1 a check failed, 2 configuration or
// solver error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "richards4/config.hpp"
#include "richards4/csv.hpp"
#include "richards4/diagnostics.hpp"
#include "richards4/harness.hpp"
#include "richards4/recovery.hpp"

namespace fs = std::filesystem;
using namespace richards4;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> stride;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "JSON run configuration (defaults if omitted)");
  sub->add_option("--out", opts.out_dir, "output directory (overrides output.directory)");
  sub->add_option("--stride", opts.stride, "snapshot stride (overrides output.stride)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", opts.seed, "seed for random initial profiles (overrides seed)");
}

RunConfig resolve(const CommonOptions& opts) {
  RunConfig cfg = opts.config_path.empty() ? parse_config("{}") : load_config(opts.config_path);
  if (opts.out_dir) cfg.output.directory = *opts.out_dir;
  if (opts.stride) cfg.output.stride = *opts.stride;
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

CsvWriter::Metadata metadata(const RunConfig& cfg) {
  return {{"config_hash", config_hash(cfg)}};
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output.directory);
  const fs::path path = fs::path(cfg.output.directory) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

Field initial_field(const RunConfig& cfg) {
  return project_initial_condition(cfg.ic, cfg.column(), cfg.seed);
}

void write_states(const RunConfig& cfg, const Trajectory& traj) {
  auto out = open_output(cfg, "states.csv");
  CsvWriter csv(out, {"t", "z", "u"}, metadata(cfg));
  for (std::size_t n = 0; n < traj.states.size(); n += cfg.output.stride)
    for (int i = 0; i < traj.column().n_cells(); ++i)
      csv.row({traj.times[n], traj.column().z(i), traj.states[n][i]});
}

void write_newton(const RunConfig& cfg, const Trajectory& traj) {
  auto out = open_output(cfg, "newton.csv");
  CsvWriter csv(out, {"step", "t", "iterations", "residual_norm"}, metadata(cfg));
  for (std::size_t n = 0; n < traj.newton_iters.size(); ++n)
    csv.row({static_cast<double>(n + 1), traj.times[n + 1],
             static_cast<double>(traj.newton_iters[n]), traj.residual_norms[n]});
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_run(const RunConfig& cfg) {
  const SoilModel soil(cfg.constitutive);
  const Trajectory traj = run(initial_field(cfg), cfg.stepping, soil);
  write_states(cfg, traj);
  write_newton(cfg, traj);
  const int max_iter = *std::max_element(traj.newton_iters.begin(), traj.newton_iters.end());
  std::cout << "steps " << traj.steps() << ", max Newton iterations " << max_iter << ", output in "
            << cfg.output.directory << "\n";
  return 0;
}

int cmd_diagnose(const RunConfig& cfg) {
  const SoilModel soil(cfg.constitutive);
  const Field u0 = initial_field(cfg);
  const Trajectory traj = run(u0, cfg.stepping, soil);
  const double beta = soil.beta_bound();
  const EnergyReport rep = energy_report(traj, soil, beta);

  auto out = open_output(cfg, "energy.csv");
  CsvWriter csv(out, {"t", "B_int", "grad_sq", "lap_sq", "cum_dissipation", "gronwall_bound"},
                metadata(cfg));
  for (const auto& r : rep.rows)
    csv.row({r.t, r.B_int, r.grad_sq, r.lap_sq, r.cum_dissipation, rep.gronwall_bound});

  const double slack = 10.0 * cfg.stepping.newton_tol * static_cast<double>(traj.steps());
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, double value) {
    ok = ok && pass;
    std::cout << verdict(pass) << "  " << std::left << std::setw(26) << name << std::setprecision(6)
              << value << "\n";
  };
  report("gronwall_excess", rep.gronwall_excess() <= slack, rep.gronwall_excess());
  report("pre_gronwall_excess", rep.pre_gronwall_excess() <= slack, rep.pre_gronwall_excess());
  const double ic = initial_condition_check(traj, u0, soil);
  report("initial_condition", ic <= 1e-12, ic);
  const double tq = time_quotient_check(traj, cfg.stepping.h, soil);
  report("time_quotient", tq >= 0.0, tq);
  std::cout << "info  regularity_monitor        " << regularity_monitor(traj) << "\n";
  if (cfg.stepping.gamma == 0.0) {
    const double up = max_principle_check(traj);
    const double down = min_principle_violation(traj);
    report("max_principle", up <= 1e-8, up);
    report("min_principle", down <= 1e-8, down);
  }
  return ok ? 0 : 1;
}

int cmd_recover(const RunConfig& cfg) {
  const SoilModel soil(cfg.constitutive);
  const Trajectory traj = run(initial_field(cfg), cfg.stepping, soil);
  const Column col = traj.column();
  double worst_consistency = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); n += cfg.output.stride) {
    const Field& u = traj.states[n];
    const Field p = pressure_field(u, soil);
    const Field s = saturation_field(u, soil);
    const Field v = darcy_velocity(u, cfg.stepping, soil);
    std::ostringstream name;
    name << "recover_" << std::setw(6) << std::setfill('0') << n << ".csv";
    auto out = open_output(cfg, name.str());
    auto meta = metadata(cfg);
    meta.emplace_back("t", format_number(traj.times[n]));
    CsvWriter csv(out, {"z", "u", "p", "S", "v"}, meta);
    for (int i = 0; i < col.n_cells(); ++i) csv.row({col.z(i), u[i], p[i], s[i], v[i]});
    worst_consistency = std::max(worst_consistency, gradient_consistency(u, soil));
  }
  std::cout << "snapshots written to " << cfg.output.directory
            << ", max gradient_consistency " << worst_consistency << "\n";
  return 0;
}

int cmd_mms(const RunConfig& cfg, const std::string& mode, int levels) {
  const SoilModel soil(cfg.constitutive);
  const ManufacturedSolution ms;
  bool ok = true;
  for (const std::string m : {"spatial", "temporal"}) {
    if (mode != "both" && mode != m) continue;
    StudySettings st = m == "spatial" ? StudySettings::spatial() : StudySettings::temporal();
    st.levels = levels;
    st.gamma = cfg.stepping.gamma;
    st.gravity_sign = cfg.grid.gravity_sign;
    const auto table = convergence_study(st, ms, soil);
    auto out = open_output(cfg, "mms_" + m + ".csv");
    CsvWriter file(out, {"level", "dz", "h", "l2_error", "observed_order"}, metadata(cfg));
    CsvWriter console(std::cout, {"level", "dz", "h", "l2_error", "observed_order"},
                      {{"mode", m}});
    const double expected = m == "spatial" ? 1.9 : 0.9;
    for (const auto& row : table) {
      const std::vector<double> values{static_cast<double>(row.level), row.dz, row.h, row.l2_error,
                                       row.observed_order};
      file.row(values);
      console.row(values);
      if (row.level > 0 && !(row.observed_order >= expected)) ok = false;
    }
  }
  return ok ? 0 : 1;
}

int cmd_probe(const RunConfig& cfg, double guess_scale) {
  const SoilModel soil(cfg.constitutive);
  const auto probe = uniqueness_probe(initial_field(cfg), cfg.stepping, soil, guess_scale);
  const double limit = 10.0 * cfg.stepping.newton_tol;
  const bool ok = probe.max_discrepancy <= limit;
  std::cout << verdict(ok) << "  max discrepancy " << probe.max_discrepancy << " (limit " << limit
            << ", guess scale " << guess_scale << ")\n";
  return ok ? 0 : 1;
}

int cmd_overshoot(const RunConfig& cfg, double gamma) {
  const SoilModel soil(cfg.constitutive);
  const Field u0 = initial_field(cfg);
  auto out = open_output(cfg, "overshoot.csv");
  CsvWriter csv(out, {"gamma", "overshoot", "undershoot", "max_u", "min_u"}, metadata(cfg));
  bool ok = true;
  for (const double g : {0.0, gamma}) {
    StepConfig sc = cfg.stepping;
    sc.gamma = g;
    const Trajectory traj = run(u0, sc, soil);
    double max_u = -1e300, min_u = 1e300;
    for (const auto& u : traj.states) {
      max_u = std::max(max_u, u.values.maxCoeff());
      min_u = std::min(min_u, u.values.minCoeff());
    }
    const double over = max_principle_check(traj);
    const double under = min_principle_violation(traj);
    csv.row({g, over, under, max_u, min_u});
    if (g == 0.0) {
      const bool pass = over <= 1e-8 && under <= 1e-8;
      ok = ok && pass;
      std::cout << verdict(pass) << "  gamma = 0: maximum principle violation " << over << "\n";
    } else {
      std::cout << "info  gamma = " << g << ": overshoot amplitude " << over << "\n";
    }
  }
  return ok ? 0 : 1;
}

int cmd_dump_constitutive(const RunConfig& cfg, int points, double p_max) {
  const SoilModel soil(cfg.constitutive);
  const auto& model = soil.constitutive();
  auto out = open_output(cfg, "constitutive.csv");
  CsvWriter csv(out, {"p", "S", "K_f", "u", "b", "B"}, metadata(cfg));
  const double p_lo = model.p_min() * (1.0 - 1e-6);
  for (int i = 0; i < points; ++i) {
    const double p = p_lo + (p_max - p_lo) * i / (points - 1);
    const double s = model.saturation(p);
    const double u = soil.kirchhoff(p);
    csv.row({p, s, model.conductivity_saturated(s), u, soil.b_of_u(u), soil.legendre_B(u)});
  }
  std::cout << points << " rows written to " << (fs::path(cfg.output.directory) / "constitutive.csv").string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order Richards equation solver in the Kirchhoff variable"};
  app.require_subcommand(1);

  CommonOptions common;
  auto* run_cmd = app.add_subcommand("run", "integrate and write states.csv / newton.csv");
  auto* diag_cmd = app.add_subcommand("diagnose", "energy report and a priori checks");
  auto* rec_cmd = app.add_subcommand("recover", "pressure, saturation and Darcy flux snapshots");
  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence orders");
  auto* probe_cmd = app.add_subcommand("probe-uniqueness", "perturbed-Newton double run");
  auto* demo_cmd = app.add_subcommand("demo-overshoot", "paired gamma = 0 / gamma > 0 runs");
  auto* dump_cmd = app.add_subcommand("dump-constitutive", "tabulate p, S, K_f, u, b, B");
  for (auto* sub : {run_cmd, diag_cmd, rec_cmd, mms_cmd, probe_cmd, demo_cmd, dump_cmd})
    add_common(sub, common);

  std::string mms_mode = "both";
  int mms_levels = 4;
  mms_cmd->add_option("--mode", mms_mode, "spatial, temporal or both")
      ->check(CLI::IsMember({"spatial", "temporal", "both"}));
  mms_cmd->add_option("--levels", mms_levels, "number of grids (>= 3)")->check(CLI::Range(3, 8));
  double guess_scale = 0.9;
  probe_cmd->add_option("--guess-scale", guess_scale, "Newton start = scale * previous state");
  double demo_gamma = 0.1;
  demo_cmd->add_option("--gamma", demo_gamma, "gamma of the regularized run")
      ->check(CLI::PositiveNumber);
  int dump_points = 401;
  double dump_p_max = 2.0;
  dump_cmd->add_option("--points", dump_points, "number of pressure samples")
      ->check(CLI::Range(2, 1000000));
  dump_cmd->add_option("--p-max", dump_p_max, "largest pressure sampled");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(common);
    if (run_cmd->parsed()) return cmd_run(cfg);
    if (diag_cmd->parsed()) return cmd_diagnose(cfg);
    if (rec_cmd->parsed()) return cmd_recover(cfg);
    if (mms_cmd->parsed()) return cmd_mms(cfg, mms_mode, mms_levels);
    if (probe_cmd->parsed()) return cmd_probe(cfg, guess_scale);
    if (demo_cmd->parsed()) return cmd_overshoot(cfg, demo_gamma);
    if (dump_cmd->parsed()) return cmd_dump_constitutive(cfg, dump_points, dump_p_max);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
