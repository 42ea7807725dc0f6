#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radelast/grid.hpp"
#include "radelast/step.hpp"
#include "radelast/stored_energy.hpp"

namespace radelast {

struct ModelConfig {
  std::string name = "default";  ///< "default" or "power"
  double p = 2.0;
  double q = 2.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double h_quadratic = 1.0;
  double h_barrier = 1.0;

  bool operator==(const ModelConfig&) const = default;
};

StoredEnergyModel make_model(const ModelConfig& cfg);

enum class Preset { homogeneous, perturbed, compressed_core, custom };

Preset parse_preset(const std::string& name);
std::string to_string(Preset p);

struct InitialConfig {
  Preset preset = Preset::perturbed;
  double epsilon = 0.05;            ///< perturbed: alpha0 = lb rho (1 + eps sin(pi rho))
  double velocity_amplitude = 0.0;  ///< v0 = A sin(pi rho)
  double noise = 0.0;               ///< uniform(-noise, noise) added to v0 at free nodes
  double core = 0.2;                ///< compressed_core: alpha0 = lb rho (c + (1-c) rho)
  std::string expression;           ///< custom: alpha0 in rho, lambda, lb, pi

  bool operator==(const InitialConfig&) const = default;
};

struct RunConfig {
  ModelConfig model;
  int N = 64;
  GridScheme scheme = GridScheme::cell_centered;
  double tau = 1e-3;
  int steps = 100;
  double lambda = 1.0;
  InitialConfig initial;
  double tol = 1e-12;
  int max_iterations = 200;
  std::string output_dir = "out";
  int snapshot_every = 0;  ///< 0: first and last only
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// alpha0 from the preset with beta0, gamma0 consistent with it. Throws
/// std::invalid_argument when the profile is not admissible on the grid.
State init_state(const GridSpec& grid, const InitialConfig& init, double lambda, std::uint64_t seed = 0);

double energy(const GridSpec& grid, const StoredEnergyModel& model, const State& state);

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double max_entropy_defect = 0.0;
  double max_el_defect = 0.0;  ///< over rho >= 0.25
  double min_alpha_prime = 0.0;
  double cavity_radius = 0.0;  ///< alpha(rho_1)^{1/3}, a diagnostic convention
  int newton_iters = 0;
  double grad_norm = 0.0;
};

struct Admissibility {
  bool ok = true;
  std::string reason;
};

/// Boundary value, alpha >= 0, alpha' > 0 on every face, v(1) = 0, finite energy.
Admissibility check_admissible(const GridSpec& grid, const StoredEnergyModel& model, const State& state,
                               double lambda);

struct Trajectory {
  RunConfig config;
  GridSpec grid;
  std::vector<State> states;              ///< states[j] at t = j tau
  std::vector<StepDiagnostics> diagnostics;  ///< one per state, step 0 included
  bool ok = true;
  std::string error;
  int failed_step = -1;
};

/// Diagnostics of the step state0 -> result.
StepDiagnostics diagnose(const GridSpec& grid, const StoredEnergyModel& model, const State& state0,
                         const StepResult& result, double tau, int step);

/// Applies minimize_step config.steps times; stops early on a solver failure.
Trajectory run(const RunConfig& config);

}  // namespace radelast
