#include <gtest/gtest.h>

#include <cmath>

#include "radelast/evolution.hpp"
#include "radelast/expression.hpp"
#include "radelast/kinematics.hpp"
#include "test_util.hpp"

using namespace radelast;

namespace {

// Energy summed straight from the staggered-layout definition with the
// default closed forms, independent of the library's assembly loops.
double energy_oracle(const GridSpec& g, const State& s) {
  double e = 0.0;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x2 = s.alpha[i] / g.nodes[i];
    const double x4 = s.gamma[i] / std::pow(g.nodes[i], 2.0 / 3.0);
    e += g.weights[i] * s.v[i] * s.v[i] / 2 + 2 * g.w2[i] * x2 * x2 + g.w4[i] * x4 * x4;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double aL = k == 0 ? 0.0 : s.alpha[k - 1];
    const double gL = k == 0 ? 0.0 : s.gamma[k - 1];
    const double d = g.face_width[k];
    const double ap = (s.alpha[k] - aL) / d;
    const double x1 = g.a1[k] * s.beta[k];
    const double x5 = 1.5 * g.a5[k] * (s.gamma[k] - gL) / d;
    e += d * (std::pow(x1, 6) + 2 * x5 * x5 + ap * ap + 1 / ap);
  }
  return e;
}

RunConfig base_config() {
  RunConfig c;
  c.N = 64;
  c.tau = 1e-3;
  c.steps = 200;
  c.lambda = 1.0;
  c.initial.preset = Preset::perturbed;
  c.initial.epsilon = 0.05;
  return c;
}

}  // namespace

TEST(InitState, HomogeneousUnitStretchHasEnergyEight) {
  const auto g = make_grid(64);
  const State s = tu::homogeneous_state(g, 1.0);
  EXPECT_NEAR(energy(g, default_model(), s), 8.0, 1e-13);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(s.alpha[i], g.nodes[i]);
}

TEST(InitState, HomogeneousStretchTwoHasUniformGamma) {
  const auto g = make_grid(32);
  const State s = tu::homogeneous_state(g, 2.0);
  const auto ap = face_alpha_prime(g, s.alpha);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const auto G = gamma_from_alpha(s.alpha[i], 0.5 * (ap[i] + ap[i + 1]), g.nodes[i]);
    EXPECT_NEAR(G.v1, 2.0, 1e-13);
    EXPECT_NEAR(G.v2, 2.0, 1e-13);
  }
  // phi(2) + 2 psi(8) + 3 g(4) + h(8) = 64 + 128 + 48 + 64 + 1/8
  EXPECT_NEAR(energy(g, default_model(), s), 304.125, 1e-11);
}

TEST(InitState, PerturbedIsAdmissible) {
  const auto g = make_grid(64);
  const State s = tu::perturbed_state(g, 0.05);
  const auto ap = face_alpha_prime(g, s.alpha);
  EXPECT_GT(*std::min_element(ap.begin(), ap.end()), 0.0);
  EXPECT_TRUE(check_admissible(g, default_model(), s, 1.0).ok);
}

TEST(InitState, RejectsCollapsingProfile) {
  const auto g = make_grid(64);
  InitialConfig init;
  init.epsilon = -3.0;  // alpha0 turns negative
  EXPECT_THROW(init_state(g, init, 1.0), std::invalid_argument);
  EXPECT_THROW(init_state(g, InitialConfig{}, -1.0), std::invalid_argument);
}

TEST(InitState, CompressedCore) {
  const auto g = make_grid(64);
  InitialConfig init;
  init.preset = Preset::compressed_core;
  init.core = 0.1;
  const State s = init_state(g, init, 1.2);
  EXPECT_TRUE(check_admissible(g, default_model(), s, 1.2).ok);
  EXPECT_LT(s.alpha[0], 0.2 * 1.728 * g.nodes[0]);
  init.core = 0.0;
  EXPECT_THROW(init_state(g, init, 1.0), std::invalid_argument);
}

TEST(InitState, CustomExpression) {
  const auto g = make_grid(32);
  InitialConfig init;
  init.preset = Preset::custom;
  init.expression = "lb * rho";
  const State a = init_state(g, init, 1.5);
  const State b = tu::homogeneous_state(g, 1.5);
  EXPECT_LE(tu::max_abs_diff(a.alpha, b.alpha), 1e-15);
  init.expression = "lb * rho^2 * (1 + 0.2*(1 - rho))";
  EXPECT_NO_THROW(init_state(g, init, 1.5));
  init.expression = "rho + 0.5";  // alpha0(0) != 0
  EXPECT_THROW(init_state(g, init, 1.0), std::invalid_argument);
  init.expression = "2*rho";  // wrong boundary value
  EXPECT_THROW(init_state(g, init, 1.0), std::invalid_argument);
  init.expression = "rho +";
  EXPECT_THROW(init_state(g, init, 1.0), ExpressionError);
}

TEST(InitState, NoiseIsSeeded) {
  const auto g = make_grid(16);
  InitialConfig init;
  init.noise = 0.1;
  const State a = init_state(g, init, 1.0, 42);
  const State b = init_state(g, init, 1.0, 42);
  const State c = init_state(g, init, 1.0, 43);
  EXPECT_EQ(a.v, b.v);
  EXPECT_NE(a.v, c.v);
  EXPECT_EQ(a.v.back(), 0.0);
}

TEST(Energy, ConstantVelocityAddsHalfSquare) {
  const auto g = make_grid(64);
  State s = tu::homogeneous_state(g, 1.0);
  const double c = 0.3;
  for (auto& v : s.v) v = c;
  EXPECT_NEAR(energy(g, default_model(), s), 8.0 + c * c / 2, 1e-13);
}

TEST(Energy, MatchesIndependentSummation) {
  for (int N : {8, 33, 64}) {
    const auto g = make_grid(N);
    const State s = tu::perturbed_state(g, 0.1, 1.1, 0.4);
    const double e = energy(g, default_model(), s);
    EXPECT_NEAR(e, energy_oracle(g, s), 1e-12 * e);
  }
}

TEST(Admissible, DetectsViolations) {
  const auto g = make_grid(16);
  const auto m = default_model();
  State s = tu::homogeneous_state(g, 1.0);
  EXPECT_TRUE(check_admissible(g, m, s, 1.0).ok);
  EXPECT_FALSE(check_admissible(g, m, s, 1.1).ok);
  State t = s;
  t.v.back() = 0.1;
  EXPECT_FALSE(check_admissible(g, m, t, 1.0).ok);
  t = s;
  t.alpha[5] = t.alpha[4];
  EXPECT_FALSE(check_admissible(g, m, t, 1.0).ok);
}

TEST(Run, HomogeneousIsStationary) {
  RunConfig c = base_config();
  c.initial.preset = Preset::homogeneous;
  c.steps = 5;
  c.lambda = 2.0;
  const auto tr = run(c);
  ASSERT_TRUE(tr.ok);
  ASSERT_EQ(tr.states.size(), 6u);
  for (const auto& s : tr.states) EXPECT_LE(tu::max_abs(s.v), 1e-10);
  for (const auto& d : tr.diagnostics) EXPECT_NEAR(d.energy, tr.diagnostics[0].energy, 1e-12 * d.energy);
}

TEST(Run, PerturbedDissipatesAndStaysAdmissible) {
  const auto tr = run(base_config());
  ASSERT_TRUE(tr.ok) << tr.error;
  ASSERT_EQ(tr.diagnostics.size(), 201u);
  const auto m = default_model();
  for (std::size_t j = 1; j < tr.diagnostics.size(); ++j) {
    const auto& d = tr.diagnostics[j];
    EXPECT_LE(d.energy, tr.diagnostics[j - 1].energy * (1 + 1e-10)) << "step " << j;
    EXPECT_GT(d.min_alpha_prime, 0.0);
    EXPECT_LE(d.max_entropy_defect, 1e-8);
    EXPECT_TRUE(check_admissible(tr.grid, m, tr.states[j], 1.0).ok) << "step " << j;
  }
}

TEST(Run, HalvingTauHalvesDissipationOverFixedTime) {
  // First order in time: the numerical energy loss over [0, T] scales like tau.
  RunConfig c = base_config();
  c.initial.velocity_amplitude = 0.5;
  c.tau = 2e-3;
  c.steps = 50;
  const auto a = run(c);
  c.tau = 1e-3;
  c.steps = 100;
  const auto b = run(c);
  ASSERT_TRUE(a.ok && b.ok);
  const double da = a.diagnostics.front().energy - a.diagnostics.back().energy;
  const double db = b.diagnostics.front().energy - b.diagnostics.back().energy;
  EXPECT_GT(da, 0.0);
  EXPECT_NEAR(db / da, 0.5, 0.1);
}

TEST(Run, DiagnosticsRowZero) {
  RunConfig c = base_config();
  c.steps = 1;
  const auto tr = run(c);
  EXPECT_EQ(tr.diagnostics[0].step, 0);
  EXPECT_EQ(tr.diagnostics[0].newton_iters, 0);
  EXPECT_EQ(tr.diagnostics[1].step, 1);
  EXPECT_DOUBLE_EQ(tr.diagnostics[1].t, 1e-3);
  EXPECT_NEAR(tr.diagnostics[0].cavity_radius, std::cbrt(tr.states[0].alpha[0]), 1e-15);
}

TEST(Run, SolverFailureStopsEarlyWithPartialTrajectory) {
  RunConfig c = base_config();
  c.initial.velocity_amplitude = 1.0;
  c.steps = 5;
  c.max_iterations = 1;
  const auto tr = run(c);
  EXPECT_FALSE(tr.ok);
  EXPECT_EQ(tr.failed_step, 1);
  EXPECT_EQ(tr.states.size(), 1u);
  EXPECT_NE(tr.error.find("MaxIterations"), std::string::npos);
}

TEST(Expression, Arithmetic) {
  const std::map<std::string, double> vars{{"x", 2.0}, {"pi", 3.0}};
  EXPECT_DOUBLE_EQ(Expression("1 + 2*3").eval(vars), 7.0);
  EXPECT_DOUBLE_EQ(Expression("(1 + 2)*3").eval(vars), 9.0);
  EXPECT_DOUBLE_EQ(Expression("-x^2").eval(vars), -4.0);
  EXPECT_DOUBLE_EQ(Expression("2^3^2").eval(vars), 512.0);
  EXPECT_DOUBLE_EQ(Expression("x/4 - 1e-1").eval(vars), 0.4);
  EXPECT_DOUBLE_EQ(Expression("sqrt(x*8) + cbrt(27)").eval(vars), 7.0);
  EXPECT_DOUBLE_EQ(Expression("sin(0) + exp(0)").eval(vars), 1.0);
  EXPECT_THROW(Expression("foo(1)"), ExpressionError);
  EXPECT_THROW(Expression("(1"), ExpressionError);
  EXPECT_THROW(Expression("y + 1").eval(vars), ExpressionError);
}
