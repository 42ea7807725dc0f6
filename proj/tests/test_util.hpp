#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "radelast/evolution.hpp"
#include "radelast/step.hpp"

namespace radelast::tu {

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

inline State perturbed_state(const GridSpec& g, double eps = 0.05, double lambda = 1.0, double vamp = 0.0) {
  InitialConfig init;
  init.preset = Preset::perturbed;
  init.epsilon = eps;
  init.velocity_amplitude = vamp;
  return init_state(g, init, lambda);
}

inline State homogeneous_state(const GridSpec& g, double lambda) {
  InitialConfig init;
  init.preset = Preset::homogeneous;
  return init_state(g, init, lambda);
}

/// Random free velocity scaled down until the lift is feasible.
inline std::vector<double> random_feasible_v(const GridSpec& g, const StoredEnergyModel& model, const State& s0,
                                             double tau, std::mt19937_64& rng, double amplitude = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(g.free_size());
  for (auto& x : v) x = amplitude * u(rng);
  while (!std::isfinite(evaluate_I(g, model, s0, tau, v))) {
    for (auto& x : v) x *= 0.5;
  }
  return v;
}

}  // namespace radelast::tu
