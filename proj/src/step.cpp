#include "radelast/step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radelast/kinematics.hpp"

namespace radelast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Value at point k of the staggered layout (point 0 = origin, point k = node k-1).
inline double at_point(const std::vector<double>& f, std::size_t k) { return k == 0 ? 0.0 : f[k - 1]; }

std::vector<double> face_difference(const GridSpec& grid, const std::vector<double>& f) {
  const std::size_t n = grid.size();
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = (f[k] - at_point(f, k)) / grid.face_width[k];
  return d;
}

std::vector<double> full_velocity(const GridSpec& grid, const std::vector<double>& v) {
  std::vector<double> full(grid.size(), 0.0);
  std::copy(v.begin(), v.end(), full.begin());
  return full;
}

struct Powers {
  std::vector<double> c1;  // alpha0^{1/3}
  std::vector<double> c2;  // alpha0^{2/3}
};

Powers alpha_powers(const std::vector<double>& alpha0) {
  Powers p;
  for (double a : alpha0) {
    const double c = std::cbrt(a);
    p.c1.push_back(c);
    p.c2.push_back(c * c);
  }
  return p;
}

}  // namespace

std::vector<double> face_alpha_prime(const GridSpec& grid, const std::vector<double>& alpha) {
  return face_difference(grid, alpha);
}

State lift_constraints(const GridSpec& grid, const State& s0, double tau, const std::vector<double>& v) {
  const std::size_t n = grid.size();
  if (v.size() != grid.free_size()) throw std::invalid_argument("lift_constraints: v must have free_size() entries");
  const auto pw = alpha_powers(s0.alpha);
  State s;
  s.v = full_velocity(grid, v);
  s.alpha.resize(n);
  s.gamma.resize(n);
  s.beta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.alpha[i] = s0.alpha[i] + 3.0 * tau * pw.c2[i] * s.v[i];
    s.gamma[i] = s0.gamma[i] + 2.0 * tau * pw.c1[i] * s.v[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    s.beta[k] = s0.beta[k] + 3.0 * tau * (s.v[k] - at_point(s.v, k)) / grid.face_width[k];
  }
  return s;
}

namespace {

struct PotentialParts {
  std::vector<double> node;  // 2 w2 psi + w4 g, per node
  std::vector<double> face;  // d (phi + 2g + h), per face
  bool feasible = true;
};

PotentialParts potential_parts(const GridSpec& grid, const StoredEnergyModel& model, const State& s) {
  const std::size_t n = grid.size();
  PotentialParts P;
  P.node.resize(n);
  P.face.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.alpha[i] < 0.0) P.feasible = false;
    P.node[i] = 2.0 * grid.w2[i] * model.psi(s.alpha[i] / grid.nodes[i]).value +
                grid.w4[i] * model.g(s.gamma[i] / grid.rho23[i]).value;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double d = grid.face_width[k];
    const double ap = (s.alpha[k] - at_point(s.alpha, k)) / d;
    if (!(ap > 0.0)) {
      P.feasible = false;
      P.face[k] = kInf;
      continue;
    }
    const double gp = (s.gamma[k] - at_point(s.gamma, k)) / d;
    P.face[k] = d * (model.phi(grid.a1[k] * s.beta[k]).value + 2.0 * model.g(1.5 * grid.a5[k] * gp).value +
                     model.h(ap).value);
  }
  return P;
}

}  // namespace

double discrete_energy(const GridSpec& grid, const StoredEnergyModel& model, const State& s) {
  const auto P = potential_parts(grid, model, s);
  if (!P.feasible) return kInf;
  double e = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) e += grid.weights[i] * 0.5 * s.v[i] * s.v[i] + P.node[i];
  for (double f : P.face) e += f;
  return e;
}

Assembly assemble_I(const GridSpec& grid, const StoredEnergyModel& model, const State& s0, double tau,
                    const std::vector<double>& v, bool derivatives) {
  const std::size_t n = grid.size();
  const std::size_t m = grid.free_size();
  Assembly A;
  const State s = lift_constraints(grid, s0, tau, v);
  const auto P = potential_parts(grid, model, s);
  if (!P.feasible) {
    A.value = kInf;
    return A;
  }
  A.feasible = true;
  double val = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dv = v[i] - s0.v[i];
    val += grid.weights[i] * 0.5 * dv * dv;
  }
  for (std::size_t i = 0; i < n; ++i) val += P.node[i];
  for (double f : P.face) val += f;
  A.value = val;
  if (!derivatives) return A;

  const auto pw = alpha_powers(s0.alpha);
  A.gradient.assign(m, 0.0);
  A.hessian = BandedMatrix(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    A.gradient[i] = grid.weights[i] * (v[i] - s0.v[i]);
    A.hessian.add(i, i, grid.weights[i]);
  }

  // Node terms: psi(alpha/rho) and g(gamma/rho^{2/3}) each depend on one v.
  for (std::size_t i = 0; i < m; ++i) {
    const double j2 = 3.0 * tau * pw.c2[i] / grid.nodes[i];
    const double j4 = 2.0 * tau * pw.c1[i] / grid.rho23[i];
    const Jet p = model.psi(s.alpha[i] / grid.nodes[i]);
    const Jet q = model.g(s.gamma[i] / grid.rho23[i]);
    A.gradient[i] += 2.0 * grid.w2[i] * p.d1 * j2 + grid.w4[i] * q.d1 * j4;
    A.hessian.add(i, i, 2.0 * grid.w2[i] * p.d2 * j2 * j2 + grid.w4[i] * q.d2 * j4 * j4);
  }

  // Face terms couple the left point (node k-1, or the origin) and the right node k.
  auto scatter = [&](std::size_t k, double f1, double f2, double jl, double jr) {
    const bool left = k >= 1 && k - 1 < m;
    const bool right = k < m;
    if (left) A.gradient[k - 1] += f1 * jl;
    if (right) A.gradient[k] += f1 * jr;
    if (left) A.hessian.add(k - 1, k - 1, f2 * jl * jl);
    if (right) A.hessian.add(k, k, f2 * jr * jr);
    if (left && right) A.hessian.add(k, k - 1, f2 * jl * jr);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const double d = grid.face_width[k];
    const double ap = (s.alpha[k] - at_point(s.alpha, k)) / d;
    const double gp = (s.gamma[k] - at_point(s.gamma, k)) / d;
    const double c = 3.0 * tau / d;
    const Jet ph = model.phi(grid.a1[k] * s.beta[k]);
    const Jet gg = model.g(1.5 * grid.a5[k] * gp);
    const Jet hh = model.h(ap);
    scatter(k, d * ph.d1, d * ph.d2, -c * grid.a1[k], c * grid.a1[k]);
    scatter(k, 2.0 * d * gg.d1, 2.0 * d * gg.d2, -c * grid.a5[k] * at_point(pw.c1, k), c * grid.a5[k] * pw.c1[k]);
    scatter(k, d * hh.d1, d * hh.d2, -c * at_point(pw.c2, k), c * pw.c2[k]);
  }
  return A;
}

double evaluate_I(const GridSpec& grid, const StoredEnergyModel& model, const State& s0, double tau,
                  const std::vector<double>& v) {
  return assemble_I(grid, model, s0, tau, v, false).value;
}

double weighted_gradient_norm(const GridSpec& grid, const std::vector<double>& gradient) {
  double r = 0.0;
  for (std::size_t i = 0; i < gradient.size(); ++i) r = std::max(r, std::abs(gradient[i]) / grid.weights[i]);
  return r;
}

std::string to_string(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::MaxIterations: return "MaxIterations";
    case SolverError::Kind::InfeasibleStart: return "InfeasibleStart";
    case SolverError::Kind::LineSearchFailure: return "LineSearchFailure";
  }
  return "?";
}

StepResult minimize_step(const GridSpec& grid, const StoredEnergyModel& model, const State& s0, double tau,
                         const std::vector<double>& v_init, const NewtonOptions& opts) {
  const std::size_t m = grid.free_size();
  std::vector<double> v = v_init.empty() ? std::vector<double>(m, 0.0) : v_init;
  if (v.size() != m) throw std::invalid_argument("minimize_step: v_init has the wrong size");

  auto pack = [&](const std::vector<double>& vv, const Assembly& A, int it, bool conv) {
    StepResult r;
    r.v = vv;
    r.state = lift_constraints(grid, s0, tau, vv);
    r.iterations = it;
    r.grad_norm = A.gradient.empty() ? kInf : weighted_gradient_norm(grid, A.gradient);
    r.value = A.value;
    r.converged = conv;
    return r;
  };

  Assembly A = assemble_I(grid, model, s0, tau, v);
  if (!A.feasible) throw SolverError(SolverError::Kind::InfeasibleStart, "initial velocity is infeasible", StepResult{});

  for (int it = 0; it < opts.max_iterations; ++it) {
    const double gnorm = weighted_gradient_norm(grid, A.gradient);
    if (gnorm <= opts.tol * (1.0 + std::abs(A.value))) return pack(v, A, it, true);

    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = -A.gradient[i];
    const auto dv = solve_spd_shifted(A.hessian, rhs);
    double slope = 0.0;
    for (std::size_t i = 0; i < m; ++i) slope += A.gradient[i] * dv[i];

    // Near the optimum the Armijo test drowns in round-off; a predicted decrease
    // at that level is taken on feasibility alone.
    const bool negligible = -slope <= 1e-14 * (1.0 + std::abs(A.value));

    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial(m);
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = v[i] + t * dv[i];
      const double f = evaluate_I(grid, model, s0, tau, trial);
      if (std::isfinite(f) && (negligible || f <= A.value + opts.armijo * t * slope)) {
        accepted = true;
        break;
      }
      t *= opts.contraction;
    }
    if (!accepted) {
      throw SolverError(SolverError::Kind::LineSearchFailure,
                        "line search failed at Newton iteration " + std::to_string(it), pack(v, A, it, false));
    }
    v = trial;
    A = assemble_I(grid, model, s0, tau, v);
  }
  const double gnorm = weighted_gradient_norm(grid, A.gradient);
  if (gnorm <= opts.tol * (1.0 + std::abs(A.value))) return pack(v, A, opts.max_iterations, true);
  throw SolverError(SolverError::Kind::MaxIterations,
                    "Newton did not converge in " + std::to_string(opts.max_iterations) + " iterations",
                    pack(v, A, opts.max_iterations, false));
}

// ---------------------------------------------------------------------------
// Diagnostics

ELResidual el_residual(const GridSpec& grid, const StoredEnergyModel& model, const State& s0, const State& s,
                       double tau, double rho_min) {
  const std::size_t n = grid.size();
  const std::size_t m = grid.free_size();
  const auto ap = face_difference(grid, s.alpha);
  const auto gp = face_difference(grid, s.gamma);
  const auto ap0 = face_difference(grid, s0.alpha);

  // Mimetic face arguments: a1 beta stands for beta rho^{2/3}, 1.5 a5 gamma'
  // for 1.5 gamma' rho^{1/3}; these are exact on homogeneous states.
  std::vector<double> x1(n);
  std::vector<double> x5(n);
  for (std::size_t k = 0; k < n; ++k) {
    x1[k] = grid.a1[k] * s.beta[k];
    x5[k] = 1.5 * grid.a5[k] * gp[k];
  }

  // Left side at interior faces k = 1..m-1.
  ELResidual out;
  std::vector<double> lhs;
  for (std::size_t k = 1; k < m; ++k) {
    const double rf = grid.face_mid[k];
    const double r13 = std::cbrt(rf);
    const double a_f = 0.5 * (s.alpha[k - 1] + s.alpha[k]);
    const double a0_f = 0.5 * (s0.alpha[k - 1] + s0.alpha[k]);
    const double g_f = 0.5 * (s.gamma[k - 1] + s.gamma[k]);
    XiVector xi = xi_assemble(a_f, s.beta[k], g_f, ap[k], gp[k], rf);
    xi[0] = x1[k];
    xi[4] = xi[5] = x5[k] * r13;
    const auto dG = grad_G(model, xi, rf);
    const auto J = omega_jacobian(gamma_from_alpha(a0_f, ap0[k], rf), rf);
    double G1 = 0.0;
    for (int i = 0; i < 7; ++i) G1 += dG[static_cast<std::size_t>(i)] * J(i, 0);
    out.rho.push_back(rf);
    lhs.push_back(3.0 * r13 * r13 * G1);
  }

  // Right side: node i owns the dual cell between face midpoints i and i+1,
  // over which s^{-1/3} is integrated exactly.
  std::vector<double> cell(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double rho = grid.nodes[i];
    const double a0p = 0.5 * (ap0[i] + ap0[i + 1]);
    XiVector xi = xi_assemble(s.alpha[i], 0.5 * (s.beta[i] + s.beta[i + 1]), s.gamma[i],
                              0.5 * (ap[i] + ap[i + 1]), 0.5 * (gp[i] + gp[i + 1]), rho);
    xi[0] = 0.5 * (x1[i] + x1[i + 1]);
    xi[4] = xi[5] = 0.5 * (x5[i] + x5[i + 1]) * grid.rho13[i];
    const auto dG = grad_G(model, xi, rho);
    const auto J = omega_jacobian(gamma_from_alpha(s0.alpha[i], a0p, rho), rho);
    double G2 = 0.0;
    for (int j = 0; j < 7; ++j) G2 += dG[static_cast<std::size_t>(j)] * (J(j, 1) + J(j, 2));
    const double lo = std::cbrt(grid.face_mid[i]);
    const double hi = std::cbrt(grid.face_mid[i + 1]);
    cell[i] = 1.5 * (hi * hi - lo * lo) * G2 + grid.weights[i] * (s.v[i] - s0.v[i]) / tau;
  }
  std::vector<double> tail(m + 1, 0.0);
  for (std::size_t i = m; i-- > 0;) tail[i] = tail[i + 1] + cell[i];

  out.defect.resize(lhs.size());
  double sum = 0.0;
  int count = 0;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    out.defect[j] = lhs[j] + tail[j + 1];
    if (out.rho[j] >= rho_min) {
      sum += out.defect[j];
      ++count;
    }
  }
  out.constant = count > 0 ? sum / count : 0.0;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    out.defect[j] -= out.constant;
    const double a = std::abs(out.defect[j]);
    out.max_abs_full = std::max(out.max_abs_full, a);
    if (out.rho[j] >= rho_min) out.max_abs = std::max(out.max_abs, a);
  }
  return out;
}

std::vector<double> entropy_defect(const GridSpec& grid, const StoredEnergyModel& model, const State& s0,
                                   const State& s, double tau) {
  const std::size_t n = grid.size();
  const std::size_t m = grid.free_size();
  const auto P0 = potential_parts(grid, model, s0);
  const auto P = potential_parts(grid, model, s);
  const auto pw = alpha_powers(s0.alpha);
  const auto ap = face_difference(grid, s.alpha);
  const auto gp = face_difference(grid, s.gamma);

  // Q_k, the discrete 3 rho^{2/3} G_{,i} Omega^i_{,1}(Gamma0) v at face k.
  std::vector<double> Q(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto avg = [&](const std::vector<double>& c) {
      return 0.5 * (at_point(c, k) * at_point(s.v, k) + c[k] * s.v[k]);
    };
    const double vbar = 0.5 * (at_point(s.v, k) + s.v[k]);
    Q[k] = 3.0 * grid.a1[k] * model.phi(grid.a1[k] * s.beta[k]).d1 * vbar +
           6.0 * grid.a5[k] * model.g(1.5 * grid.a5[k] * gp[k]).d1 * avg(pw.c1) +
           3.0 * model.h(ap[k]).d1 * avg(pw.c2);
  }

  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = grid.weights[i];
    const double eta = w * 0.5 * s.v[i] * s.v[i] + P.node[i] + 0.5 * (P.face[i] + P.face[i + 1]);
    const double eta0 = w * 0.5 * s0.v[i] * s0.v[i] + P0.node[i] + 0.5 * (P0.face[i] + P0.face[i + 1]);
    out[i] = ((eta - eta0) / tau - (Q[i + 1] - Q[i])) / w;
  }
  return out;
}

RegularityDefect regularity_defect(const GridSpec& grid, const State& s0, const State& s, double rho_min) {
  const auto ap = face_difference(grid, s.alpha);
  const auto ap0 = face_difference(grid, s0.alpha);
  const auto gp = face_difference(grid, s.gamma);
  const auto gp0 = face_difference(grid, s0.gamma);
  RegularityDefect out;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double r = grid.face_mid[k];
    if (r < rho_min) continue;
    const double r13 = std::cbrt(r);
    const double r23 = r13 * r13;
    const double a = 0.5 * (s.alpha[k - 1] + s.alpha[k]);
    const double a0 = 0.5 * (s0.alpha[k - 1] + s0.alpha[k]);
    const double q13 = std::cbrt(r / a0);
    const double f1 = s0.beta[k] * r23 - ap0[k] * r23 / (3.0 * std::cbrt(a0 * a0)) * (1.0 + 2.0 * a / a0);
    const double f2 = 1.5 * gp0[k] * r13 - ap0[k] * r13 / (3.0 * std::cbrt(a0)) * (2.0 + a / a0);
    out.beta_max = std::max(out.beta_max, std::abs(s.beta[k] * r23 - ap[k] * q13 * q13 - f1));
    out.gamma_max = std::max(out.gamma_max, std::abs(1.5 * gp[k] * r13 - ap[k] * q13 - f2));
  }
  return out;
}

}  // namespace radelast
