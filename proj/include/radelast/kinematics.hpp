#pragma once

#include <array>
#include <functional>
#include <vector>

#include "radelast/grid.hpp"
#include "radelast/stored_energy.hpp"

namespace radelast {

/// Principal stretches in the rho frame; v2 == v3 for radial motions.
struct GammaTriple {
  double v1 = 1.0;
  double v2 = 1.0;
  double v3 = 1.0;
};

/// d Omega^i / d v_j, rows i = 0..6, columns j = 0..2.
struct OmegaJacobian {
  std::array<std::array<double, 3>, 7> m{};

  double operator()(int i, int j) const { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

struct RFrame {
  std::vector<double> R;
  std::vector<double> w;
};

struct RhoFrame {
  std::vector<double> rho;
  std::vector<double> alpha;
  std::vector<double> gamma;
};

/// rho = R^3, alpha = w^3, gamma = alpha^{2/3}. Rejects non-increasing w.
RhoFrame to_rho_frame(const RFrame& frame);
RFrame from_rho_frame(const RhoFrame& frame);

/// (alpha' (rho/alpha)^{2/3}, (alpha/rho)^{1/3}, (alpha/rho)^{1/3}).
GammaTriple gamma_from_alpha(double alpha, double alpha_prime, double rho);

XiVector xi_assemble(double alpha, double beta, double gamma, double alpha_prime, double gamma_prime,
                     double rho);

/// (v1, v2^3, v3^3, v2 v3 r^{1/3}, v1 v3 r^{1/3}, v1 v2 r^{1/3}, v1 v2 v3 r^{2/3}).
std::array<double, 7> omega(const GammaTriple& g, double rho);
OmegaJacobian omega_jacobian(const GammaTriple& g, double rho);

/// Null-Lagrangian indices are 1-based as in Omega^1..Omega^7.
/// Residual of -3 rho^{2/3} d/drho(Omega^i_{,1}) + rho^{-1/3}(Omega^i_{,2} + Omega^i_{,3})
/// at every grid node, with alpha' and the outer derivative taken by ddr.
std::vector<double> null_lagrangian_residual(const GridSpec& grid, const std::vector<double>& alpha,
                                             int index);

using PathFunction = std::function<double(double rho, double t)>;

/**
 * Transport identity d/dt Omega^i(Gamma) = 3 rho^{2/3} d/drho(Omega^i_{,1}(Gamma) v)
 * for a manufactured path alpha(rho, t). The time derivative is a forward
 * difference over dt; v = alpha_t / (3 alpha^{2/3}) from the same difference.
 */
std::vector<double> transport_residual(const GridSpec& grid, const PathFunction& alpha, double t, double dt,
                                       int index);

}  // namespace radelast
