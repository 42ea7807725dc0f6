#include "radelast/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "radelast/expression.hpp"

namespace radelast {

StoredEnergyModel make_model(const ModelConfig& cfg) {
  if (cfg.name == "default") return default_model();
  if (cfg.name == "power") return power_model(cfg.p, cfg.q, cfg.c1, cfg.c2, cfg.h_quadratic, cfg.h_barrier);
  throw std::invalid_argument("unknown model '" + cfg.name + "'");
}

Preset parse_preset(const std::string& name) {
  if (name == "homogeneous") return Preset::homogeneous;
  if (name == "perturbed") return Preset::perturbed;
  if (name == "compressed_core") return Preset::compressed_core;
  if (name == "custom") return Preset::custom;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::homogeneous: return "homogeneous";
    case Preset::perturbed: return "perturbed";
    case Preset::compressed_core: return "compressed_core";
    case Preset::custom: return "custom";
  }
  return "?";
}

State init_state(const GridSpec& grid, const InitialConfig& init, double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double lb = lambda * lambda * lambda;
  const double pi = std::numbers::pi;
  const std::size_t n = grid.size();

  std::optional<Expression> expr;
  std::map<std::string, double> vars{{"lambda", lambda}, {"lb", lb}, {"pi", pi}, {"rho", 0.0}};
  if (init.preset == Preset::custom) {
    expr.emplace(init.expression);
    if (std::abs(expr->eval(vars)) > 1e-12) throw std::invalid_argument("custom alpha0 must vanish at rho = 0");
    vars["rho"] = 1.0;
    const double at1 = expr->eval(vars);
    if (std::abs(at1 - lb) > 1e-12 * lb) {
      throw std::invalid_argument("custom alpha0 must equal lambda^3 at rho = 1, got " + std::to_string(at1));
    }
  }
  if (init.preset == Preset::compressed_core && !(init.core > 0.0 && init.core <= 1.0)) {
    throw std::invalid_argument("compressed_core needs core in (0, 1]");
  }

  State s;
  s.alpha.resize(n);
  s.v.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.nodes[i];
    switch (init.preset) {
      case Preset::homogeneous: s.alpha[i] = lb * r; break;
      case Preset::perturbed: s.alpha[i] = lb * r * (1.0 + init.epsilon * std::sin(pi * r)); break;
      case Preset::compressed_core: s.alpha[i] = lb * r * (init.core + (1.0 - init.core) * r); break;
      case Preset::custom:
        vars["rho"] = r;
        s.alpha[i] = expr->eval(vars);
        break;
    }
  }
  s.alpha.back() = lb;

  if (init.preset != Preset::homogeneous) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      s.v[i] = init.velocity_amplitude * std::sin(pi * grid.nodes[i]);
      if (init.noise != 0.0) s.v[i] += init.noise * unif(rng);
    }
  }

  const auto ap = face_alpha_prime(grid, s.alpha);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(ap[k] > 0.0) || !std::isfinite(ap[k])) {
      throw std::invalid_argument("initial alpha0' is not positive on face " + std::to_string(k));
    }
  }
  s.gamma.resize(n);
  s.beta.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.gamma[i] = std::cbrt(s.alpha[i] * s.alpha[i]);
  // beta0 = 3 d/drho alpha^{1/3}, differenced on faces so that a1 beta0 = lambda exactly when homogeneous.
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = k == 0 ? 0.0 : std::cbrt(s.alpha[k - 1]);
    s.beta[k] = 3.0 * (std::cbrt(s.alpha[k]) - lo) / grid.face_width[k];
  }
  return s;
}

double energy(const GridSpec& grid, const StoredEnergyModel& model, const State& state) {
  return discrete_energy(grid, model, state);
}

Admissibility check_admissible(const GridSpec& grid, const StoredEnergyModel& model, const State& s,
                               double lambda) {
  const std::size_t n = grid.size();
  if (s.alpha.size() != n || s.gamma.size() != n || s.v.size() != n || s.beta.size() != n) {
    return {false, "field sizes do not match the grid"};
  }
  const double lb = lambda * lambda * lambda;
  if (std::abs(s.alpha.back() - lb) > 1e-12 * std::max(1.0, lb)) return {false, "boundary value alpha(1) != lambda^3"};
  if (s.v.back() != 0.0) return {false, "boundary velocity is not zero"};
  for (std::size_t i = 0; i < n; ++i) {
    if (s.alpha[i] < 0.0) return {false, "alpha < 0 at node " + std::to_string(i)};
  }
  const auto ap = face_alpha_prime(grid, s.alpha);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(ap[k] > 0.0)) return {false, "alpha' <= 0 on face " + std::to_string(k)};
  }
  if (!std::isfinite(energy(grid, model, s))) return {false, "energy is not finite"};
  return {};
}

StepDiagnostics diagnose(const GridSpec& grid, const StoredEnergyModel& model, const State& state0,
                         const StepResult& result, double tau, int step) {
  StepDiagnostics d;
  d.step = step;
  d.t = step * tau;
  d.energy = energy(grid, model, result.state);
  const auto ent = entropy_defect(grid, model, state0, result.state, tau);
  d.max_entropy_defect = *std::max_element(ent.begin(), ent.end());
  d.max_el_defect = el_residual(grid, model, state0, result.state, tau).max_abs;
  const auto ap = face_alpha_prime(grid, result.state.alpha);
  d.min_alpha_prime = *std::min_element(ap.begin(), ap.end());
  d.cavity_radius = std::cbrt(result.state.alpha.front());
  d.newton_iters = result.iterations;
  d.grad_norm = result.grad_norm;
  return d;
}

namespace {

StepDiagnostics initial_diagnostics(const GridSpec& grid, const StoredEnergyModel& model, const State& s) {
  StepDiagnostics d;
  d.energy = energy(grid, model, s);
  const auto ap = face_alpha_prime(grid, s.alpha);
  d.min_alpha_prime = *std::min_element(ap.begin(), ap.end());
  d.cavity_radius = std::cbrt(s.alpha.front());
  return d;
}

}  // namespace

Trajectory run(const RunConfig& cfg) {
  Trajectory tr;
  tr.config = cfg;
  tr.grid = make_grid(cfg.N, cfg.scheme);
  const auto model = make_model(cfg.model);
  State s = init_state(tr.grid, cfg.initial, cfg.lambda, cfg.seed);
  tr.states.push_back(s);
  tr.diagnostics.push_back(initial_diagnostics(tr.grid, model, s));

  NewtonOptions opts;
  opts.tol = cfg.tol;
  opts.max_iterations = cfg.max_iterations;
  std::vector<double> guess(tr.grid.free_size());
  for (int j = 1; j <= cfg.steps; ++j) {
    // Warm start from the previous velocity when it is feasible; zero always is.
    std::copy(s.v.begin(), s.v.end() - 1, guess.begin());
    if (!std::isfinite(evaluate_I(tr.grid, model, s, cfg.tau, guess))) std::fill(guess.begin(), guess.end(), 0.0);
    try {
      const StepResult r = minimize_step(tr.grid, model, s, cfg.tau, guess, opts);
      tr.diagnostics.push_back(diagnose(tr.grid, model, s, r, cfg.tau, j));
      s = r.state;
      tr.states.push_back(s);
    } catch (const SolverError& e) {
      tr.ok = false;
      tr.failed_step = j;
      tr.error = "step " + std::to_string(j) + ": " + to_string(e.kind()) + ": " + e.what();
      break;
    }
  }
  return tr;
}

}  // namespace radelast
