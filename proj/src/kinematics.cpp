#include "radelast/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace radelast {

RhoFrame to_rho_frame(const RFrame& frame) {
  if (frame.R.size() != frame.w.size()) throw std::invalid_argument("to_rho_frame: size mismatch");
  RhoFrame out;
  for (std::size_t i = 0; i < frame.R.size(); ++i) {
    if (frame.w[i] < 0.0) throw DomainError("to_rho_frame: negative w");
    if (i > 0 && !(frame.w[i] > frame.w[i - 1])) throw DomainError("to_rho_frame: w must be increasing");
    const double R = frame.R[i];
    const double w = frame.w[i];
    out.rho.push_back(R * R * R);
    out.alpha.push_back(w * w * w);
    out.gamma.push_back(w * w);
  }
  return out;
}

RFrame from_rho_frame(const RhoFrame& frame) {
  RFrame out;
  for (std::size_t i = 0; i < frame.rho.size(); ++i) {
    out.R.push_back(std::cbrt(frame.rho[i]));
    out.w.push_back(std::cbrt(frame.alpha[i]));
  }
  return out;
}

GammaTriple gamma_from_alpha(double alpha, double alpha_prime, double rho) {
  if (!(alpha > 0.0)) throw DomainError("gamma_from_alpha: alpha must be positive");
  const double s = std::cbrt(alpha / rho);
  return {alpha_prime / (s * s), s, s};
}

XiVector xi_assemble(double alpha, double beta, double gamma, double alpha_prime, double gamma_prime,
                     double rho) {
  const double r13 = std::cbrt(rho);
  const double r23 = r13 * r13;
  XiVector xi;
  xi[0] = beta * r23;
  xi[1] = alpha / rho;
  xi[2] = alpha / rho;
  xi[3] = gamma / r13;
  xi[4] = 1.5 * gamma_prime * r23;
  xi[5] = xi[4];
  xi[6] = alpha_prime * r23;
  return xi;
}

std::array<double, 7> omega(const GammaTriple& g, double rho) {
  const double r13 = std::cbrt(rho);
  const double r23 = r13 * r13;
  return {g.v1,
          g.v2 * g.v2 * g.v2,
          g.v3 * g.v3 * g.v3,
          g.v2 * g.v3 * r13,
          g.v1 * g.v3 * r13,
          g.v1 * g.v2 * r13,
          g.v1 * g.v2 * g.v3 * r23};
}

OmegaJacobian omega_jacobian(const GammaTriple& g, double rho) {
  const double r13 = std::cbrt(rho);
  const double r23 = r13 * r13;
  OmegaJacobian J;
  J.m[0] = {1.0, 0.0, 0.0};
  J.m[1] = {0.0, 3.0 * g.v2 * g.v2, 0.0};
  J.m[2] = {0.0, 0.0, 3.0 * g.v3 * g.v3};
  J.m[3] = {0.0, g.v3 * r13, g.v2 * r13};
  J.m[4] = {g.v3 * r13, 0.0, g.v1 * r13};
  J.m[5] = {g.v2 * r13, g.v1 * r13, 0.0};
  J.m[6] = {g.v2 * g.v3 * r23, g.v1 * g.v3 * r23, g.v1 * g.v2 * r23};
  return J;
}

namespace {

void check_index(int index) {
  if (index < 1 || index > 7) throw std::invalid_argument("null-Lagrangian index must be in 1..7");
}

std::vector<GammaTriple> gammas(const GridSpec& grid, const std::vector<double>& alpha) {
  const auto ap = ddr(grid, alpha);
  std::vector<GammaTriple> out;
  out.reserve(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) out.push_back(gamma_from_alpha(alpha[j], ap[j], grid.nodes[j]));
  return out;
}

}  // namespace

std::vector<double> null_lagrangian_residual(const GridSpec& grid, const std::vector<double>& alpha,
                                             int index) {
  check_index(index);
  const int i = index - 1;
  const auto G = gammas(grid, alpha);
  const std::size_t n = grid.size();
  std::vector<double> col1(n);
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto J = omega_jacobian(G[j], grid.nodes[j]);
    col1[j] = J(i, 0);
    rhs[j] = (J(i, 1) + J(i, 2)) / grid.rho13[j];
  }
  const auto d = ddr(grid, col1);
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = -3.0 * grid.rho23[j] * d[j] + rhs[j];
  return r;
}

std::vector<double> transport_residual(const GridSpec& grid, const PathFunction& alpha, double t, double dt,
                                       int index) {
  check_index(index);
  const int i = index - 1;
  const std::size_t n = grid.size();
  std::vector<double> a0(n);
  std::vector<double> a1(n);
  for (std::size_t j = 0; j < n; ++j) {
    a0[j] = alpha(grid.nodes[j], t);
    a1[j] = alpha(grid.nodes[j], t + dt);
  }
  const auto G0 = gammas(grid, a0);
  const auto G1 = gammas(grid, a1);
  std::vector<double> flux(n);
  std::vector<double> dt_omega(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = grid.nodes[j];
    const double a23 = std::cbrt(a0[j] * a0[j]);
    const double v = (a1[j] - a0[j]) / (3.0 * dt * a23);
    flux[j] = omega_jacobian(G0[j], rho)(i, 0) * v;
    dt_omega[j] = (omega(G1[j], rho)[static_cast<std::size_t>(i)] - omega(G0[j], rho)[static_cast<std::size_t>(i)]) / dt;
  }
  const auto d = ddr(grid, flux);
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = dt_omega[j] - 3.0 * grid.rho23[j] * d[j];
  return r;
}

}  // namespace radelast
