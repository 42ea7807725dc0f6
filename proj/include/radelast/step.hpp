#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "radelast/banded.hpp"
#include "radelast/grid.hpp"
#include "radelast/stored_energy.hpp"

namespace radelast {

/**
 * @brief One time level of (alpha, beta, gamma, v)
 *
 * alpha, gamma, v live on the grid nodes (size n, last = boundary);
 * beta lives on the n faces. The origin values alpha = gamma = v = 0 are
 * implicit. beta and gamma are carried as independent unknowns, so after a
 * step they only agree with alpha'/alpha^{2/3} and alpha^{2/3} up to O(tau^2).
 */
struct State {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<double> v;
};

/// Face differences (alpha_{k+1} - alpha_k)/d_k with alpha(0) = 0.
std::vector<double> face_alpha_prime(const GridSpec& grid, const std::vector<double>& alpha);

/// alpha = a0 + 3 tau a0^{2/3} v, gamma = g0 + 2 tau a0^{1/3} v, beta = b0 + 3 tau (face difference of v).
/// v has free_size() entries; the boundary velocity is zero.
State lift_constraints(const GridSpec& grid, const State& state0, double tau, const std::vector<double>& v);

/// Total energy sum(1/2 v^2) + stored energy on the staggered layout.
double discrete_energy(const GridSpec& grid, const StoredEnergyModel& model, const State& s);

struct Assembly {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> gradient;
  BandedMatrix hessian;
};

/// I(v) with exact gradient and tridiagonal Hessian. Infeasible v (some
/// alpha' <= 0 or alpha < 0) gives feasible = false and value = +inf.
Assembly assemble_I(const GridSpec& grid, const StoredEnergyModel& model, const State& state0, double tau,
                    const std::vector<double>& v, bool derivatives = true);

double evaluate_I(const GridSpec& grid, const StoredEnergyModel& model, const State& state0, double tau,
                  const std::vector<double>& v);

struct NewtonOptions {
  double tol = 1e-12;  ///< on max_j |dI/dv_j| / w_j, relative to 1 + |I|
  int max_iterations = 200;
  double armijo = 1e-4;
  double contraction = 0.5;
  int max_backtracks = 60;
};

struct StepResult {
  State state;
  std::vector<double> v;  ///< free velocities
  int iterations = 0;
  double grad_norm = 0.0;
  double value = 0.0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { MaxIterations, InfeasibleStart, LineSearchFailure };
  SolverError(Kind kind, const std::string& what, StepResult best)
      : std::runtime_error(what), kind_(kind), best_(std::move(best)) {}
  Kind kind() const { return kind_; }
  const StepResult& best() const { return best_; }

 private:
  Kind kind_;
  StepResult best_;
};

std::string to_string(SolverError::Kind kind);

/// Damped Newton from v_init (empty -> zero) with feasibility backtracking.
StepResult minimize_step(const GridSpec& grid, const StoredEnergyModel& model, const State& state0, double tau,
                         const std::vector<double>& v_init = {}, const NewtonOptions& opts = {});

/// Stationarity measure used by the stopping rule.
double weighted_gradient_norm(const GridSpec& grid, const std::vector<double>& gradient);

struct ELResidual {
  std::vector<double> rho;     ///< interior face midpoints
  std::vector<double> defect;  ///< after removing the fitted constant
  double constant = 0.0;
  double max_abs = 0.0;       ///< over rho >= rho_min
  double max_abs_full = 0.0;  ///< over all interior faces, same constant
};

/**
 * Defect of 3 rho^{2/3} G1(rho) = int_1^rho (s^{-1/3} G2 + (v - v0)/tau) ds + const.
 * G1 is formed at interior faces, G2 at free nodes, both through grad_G and
 * the Omega Jacobian at Gamma of the previous level. The constant is the
 * least-squares fit over faces with rho >= rho_min.
 */
ELResidual el_residual(const GridSpec& grid, const StoredEnergyModel& model, const State& state0,
                       const State& state, double tau, double rho_min = 0.25);

/**
 * Cell entropy defect at every free node:
 * ((eta - eta0)/tau - (Q_right - Q_left)) / w_j, eta the cell share of
 * 1/2 v^2 + G and Q the face flux 3 rho^{2/3} G_{,i} Omega^i_{,1}(Gamma0) v.
 */
std::vector<double> entropy_defect(const GridSpec& grid, const StoredEnergyModel& model, const State& state0,
                                   const State& state, double tau);

struct RegularityDefect {
  double beta_max = 0.0;   ///< |beta rho^{2/3} - alpha'(rho/alpha0)^{2/3} - f1|
  double gamma_max = 0.0;  ///< |1.5 gamma' rho^{1/3} - alpha'(rho/alpha0)^{1/3} - f2|
};

/// Both relations checked at faces with rho >= rho_min.
RegularityDefect regularity_defect(const GridSpec& grid, const State& state0, const State& state,
                                   double rho_min = 0.25);

}  // namespace radelast
