// radelast: command-line front end for the radial elastodynamics solver.
//
//   radelast run --config run.yaml --out out/ [--seed N] [--quiet]
//   radelast audit-model [--config run.yaml]
//   radelast check-identities [--levels 32,64,128]
//   radelast refine --config run.yaml [--levels 32,64,128]
//   radelast plot --out out/
//
// Exit codes: 0 ok, 1 audit failure or unexpected error, 2 config error,
// 3 solver failure, 4 I/O error.

#include <fmt/format.h>

#include <cmath>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "radelast/cli_io.hpp"
#include "radelast/evolution.hpp"
#include "radelast/kinematics.hpp"

namespace fs = std::filesystem;
using namespace radelast;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

double max_abs_from(const GridSpec& g, const std::vector<double>& r, double rho_min) {
  double m = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (g.nodes[i] >= rho_min) m = std::max(m, std::abs(r[i]));
  }
  return m;
}

std::string order_cell(double prev, double cur) {
  if (prev <= 0.0 || cur <= 0.0) return "     -";
  return fmt::format("{:6.3f}", std::log2(prev / cur));
}

RunConfig load_config(const std::string& path) {
  const auto env = environment_overrides();
  return path.empty() ? parse_config_text("", env) : parse_config_file(path, env);
}

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed, bool quiet) {
  RunConfig cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  if (!out.empty()) cfg.output_dir = out;
  const Trajectory tr = run(cfg);
  write_outputs(tr, cfg.output_dir);
  if (!quiet) {
    const auto& first = tr.diagnostics.front();
    const auto& last = tr.diagnostics.back();
    double ent = -INFINITY, el = 0.0, ap = INFINITY;
    for (const auto& d : tr.diagnostics) {
      if (d.step > 0) ent = std::max(ent, d.max_entropy_defect);
      el = std::max(el, d.max_el_defect);
      ap = std::min(ap, d.min_alpha_prime);
    }
    fmt::print("steps {}  E0 {:.12g}  E {:.12g}\n", last.step, first.energy, last.energy);
    fmt::print("max entropy defect {:.3e}  max EL defect {:.3e}  min alpha' {:.6g}\n", ent, el, ap);
    fmt::print("outputs written to {}\n", cfg.output_dir);
  }
  if (!tr.ok) {
    std::cerr << "solver failure: " << tr.error << "\n";
    return kExitSolver;
  }
  return 0;
}

int cmd_audit(const std::string& config) {
  const RunConfig cfg = load_config(config);
  const auto report = audit_assumptions(make_model(cfg.model));
  std::cout << "model: " << cfg.model.name << "\n" << report.to_text();
  return report.all_passed() ? 0 : 1;
}

int cmd_identities(const std::vector<int>& levels) {
  const double rho_min = 0.25;
  auto alpha = [](double r, double t) { return r + 0.1 * r * r * (1.0 + t); };
  fmt::print("null-Lagrangian residuals, alpha = rho + 0.1 rho^2, max over rho >= {}\n", rho_min);
  fmt::print("{:>6} {:>4} {:>14} {:>7}\n", "N", "i", "max|r|", "order");
  for (int i : {1, 5, 6, 7}) {
    double prev = 0.0;
    for (int N : levels) {
      const auto g = make_grid(N);
      std::vector<double> a(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) a[j] = alpha(g.nodes[j], 0.0);
      const double e = max_abs_from(g, null_lagrangian_residual(g, a, i), rho_min);
      fmt::print("{:>6} {:>4} {:>14.6e} {:>7}\n", N, i, e, order_cell(prev, e));
      prev = e;
    }
  }
  fmt::print("\ntransport residuals, alpha = rho + 0.1 rho^2 (1 + t), dt = 0.1/N^2\n");
  fmt::print("{:>6} {:>4} {:>14} {:>7}\n", "N", "i", "max|r|", "order");
  for (int i : {1, 5, 6, 7}) {
    double prev = 0.0;
    for (int N : levels) {
      const auto g = make_grid(N);
      const double dt = 0.1 / (static_cast<double>(N) * N);
      const double e = max_abs_from(g, transport_residual(g, alpha, 0.0, dt, i), rho_min);
      fmt::print("{:>6} {:>4} {:>14.6e} {:>7}\n", N, i, e, order_cell(prev, e));
      prev = e;
    }
  }
  return 0;
}

int cmd_refine(const std::string& config, const std::vector<int>& levels) {
  const RunConfig cfg = load_config(config);
  const auto model = make_model(cfg.model);
  fmt::print("one step, tau = {}, preset {}\n", cfg.tau, to_string(cfg.initial.preset));
  fmt::print("{:>6} {:>14} {:>7} {:>14} {:>14}\n", "N", "EL defect", "order", "max entropy", "Newton iters");
  double prev = 0.0;
  for (int N : levels) {
    const auto g = make_grid(N, cfg.scheme);
    const State s0 = init_state(g, cfg.initial, cfg.lambda, cfg.seed);
    NewtonOptions opts;
    opts.tol = cfg.tol;
    opts.max_iterations = cfg.max_iterations;
    const auto r = minimize_step(g, model, s0, cfg.tau, {}, opts);
    const auto el = el_residual(g, model, s0, r.state, cfg.tau);
    const auto ent = entropy_defect(g, model, s0, r.state, cfg.tau);
    const double emax = *std::max_element(ent.begin(), ent.end());
    fmt::print("{:>6} {:>14.6e} {:>7} {:>14.6e} {:>14}\n", N, el.max_abs, order_cell(prev, el.max_abs), emax,
               r.iterations);
    prev = el.max_abs;
  }
  return 0;
}

int cmd_plot(const std::string& out) {
  const fs::path dir(out);
  const Table diag = read_csv(dir / "diagnostics.csv");
  const std::string energy_svg =
      svg_line_chart("total energy", "t", {Series{"E", diag.column("t"), diag.column("E")}});
  std::vector<fs::path> snaps;
  if (fs::exists(dir / "snapshots")) {
    for (const auto& e : fs::directory_iterator(dir / "snapshots")) snaps.push_back(e.path());
  }
  std::sort(snaps.begin(), snaps.end());
  std::ofstream(dir / "energy.svg") << energy_svg;
  if (!snaps.empty()) {
    const Table s = read_csv(snaps.back());
    const auto rho = s.column("rho");
    std::vector<double> ratio;
    const auto alpha = s.column("alpha");
    for (std::size_t i = 0; i < rho.size(); ++i) ratio.push_back(alpha[i] / rho[i]);
    const std::string prof = svg_line_chart("profiles at " + snaps.back().stem().string(), "rho",
                                            {Series{"alpha/rho", rho, ratio}, Series{"beta", rho, s.column("beta")},
                                             Series{"v", rho, s.column("v")}});
    std::ofstream(dir / "profiles.svg") << prof;
  }
  if (!fs::exists(dir / "energy.svg")) throw IoError("cannot write " + (dir / "energy.svg").string());
  fmt::print("wrote {}\n", (dir / "energy.svg").string());
  if (!snaps.empty()) fmt::print("wrote {}\n", (dir / "profiles.svg").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial polyconvex elastodynamics by minimizing movements"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::vector<int> levels{32, 64, 128};

  auto* run_cmd = app.add_subcommand("run", "run a configured evolution and write outputs");
  run_cmd->add_option("--config", config, "YAML run configuration")->required();
  run_cmd->add_option("--out", out, "output directory (overrides output.dir)");
  run_cmd->add_option("--seed", seed, "random seed (overrides seed)");
  run_cmd->add_flag("--quiet", quiet, "suppress the summary");

  auto* audit_cmd = app.add_subcommand("audit-model", "numerically audit assumptions A1-A4");
  audit_cmd->add_option("--config", config, "YAML run configuration (model section)");

  auto* id_cmd = app.add_subcommand("check-identities", "null-Lagrangian and transport residual tables");
  id_cmd->add_option("--levels", levels, "grid sizes")->delimiter(',');

  auto* refine_cmd = app.add_subcommand("refine", "grid refinement of EL and entropy defects");
  refine_cmd->add_option("--config", config, "YAML run configuration");
  refine_cmd->add_option("--levels", levels, "grid sizes")->delimiter(',');

  auto* plot_cmd = app.add_subcommand("plot", "SVG charts from written outputs");
  plot_cmd->add_option("--out", out, "output directory of a previous run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config, out, seed, quiet);
    if (*audit_cmd) return cmd_audit(config);
    if (*id_cmd) return cmd_identities(levels);
    if (*refine_cmd) return cmd_refine(config, levels);
    if (*plot_cmd) return cmd_plot(out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitSolver;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
