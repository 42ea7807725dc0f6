#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "radelast/kinematics.hpp"
#include "radelast/stored_energy.hpp"

using namespace radelast;

namespace {

// Phi composed straight from the stretches with the default closed forms;
// shares no code with the model object.
double phi_oracle(double v1, double v2, double v3) {
  auto p6 = [](double x) { return std::pow(x, 6); };
  const double d = v1 * v2 * v3;
  return p6(v1) + p6(v2) + p6(v3) + std::pow(v2 * v3, 2) + std::pow(v1 * v3, 2) + std::pow(v1 * v2, 2) + d * d +
         1.0 / d;
}

XiVector random_xi(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  XiVector xi;
  for (int i = 0; i < 6; ++i) xi[static_cast<std::size_t>(i)] = u(rng);
  xi[1] = xi[2] = std::abs(xi[1]);
  xi[6] = pos(rng);
  return xi;
}

}  // namespace

TEST(Component, DefaultPhiAtOne) {
  const auto m = default_model();
  const Jet j = m.eval(Component::phi, 1.0);
  EXPECT_EQ(j.value, 1.0);
  EXPECT_EQ(j.d1, 6.0);
  EXPECT_EQ(j.d2, 30.0);
}

TEST(Component, DefaultHAtOne) {
  const Jet j = default_model().eval(Component::h, 1.0);
  EXPECT_EQ(j.value, 2.0);
  EXPECT_EQ(j.d1, 1.0);
  EXPECT_EQ(j.d2, 4.0);
}

TEST(Component, BarrierDominatesNearZero) {
  EXPECT_GE(default_model().eval(Component::h, 1e-3).value, 1e3);
}

TEST(Component, HRejectsNonPositive) {
  const auto m = default_model();
  EXPECT_THROW(m.eval(Component::h, 0.0), DomainError);
  EXPECT_THROW(m.eval(Component::h, -1.0), DomainError);
  EXPECT_NO_THROW(m.eval(Component::g, -1.0));
}

TEST(Component, NamesRoundTrip) {
  for (auto c : {Component::phi, Component::psi, Component::g, Component::h}) {
    EXPECT_EQ(parse_component(to_string(c)), c);
  }
  EXPECT_THROW(parse_component("chi"), std::invalid_argument);
}

TEST(Component, PowerModelReproducesDefault) {
  const auto a = default_model();
  const auto b = power_model(2, 2, 1, 1, 1, 1);
  for (double x : {-3.0, -0.7, 0.0, 0.4, 1.0, 2.5}) {
    for (auto c : {Component::phi, Component::psi, Component::g}) {
      const Jet ja = a.eval(c, x);
      const Jet jb = b.eval(c, x);
      EXPECT_NEAR(ja.value, jb.value, 1e-12 * (1 + std::abs(ja.value)));
      EXPECT_NEAR(ja.d1, jb.d1, 1e-12 * (1 + std::abs(ja.d1)));
      EXPECT_NEAR(ja.d2, jb.d2, 1e-12 * (1 + std::abs(ja.d2)));
    }
  }
}

TEST(EvalG, IdentityIsEight) {
  XiVector xi;
  xi.xi.fill(1.0);
  EXPECT_DOUBLE_EQ(eval_G(default_model(), xi, 1.0), 8.0);
}

TEST(EvalG, HomogeneousIdentityIsEightAtEveryRho) {
  const auto m = default_model();
  for (double rho : {0.01, 0.2, 0.5, 0.93}) {
    // alpha = rho, beta = alpha'/alpha^{2/3}, gamma = alpha^{2/3}
    const double r23 = std::cbrt(rho * rho);
    const XiVector xi = xi_assemble(rho, 1.0 / r23, r23, 1.0, 2.0 / (3.0 * std::cbrt(rho)), rho);
    EXPECT_NEAR(eval_G(m, xi, rho), 8.0, 1e-13);
  }
}

TEST(EvalG, RejectsNonPositiveXi7) {
  XiVector xi;
  xi.xi.fill(1.0);
  xi[6] = 0.0;
  EXPECT_THROW(eval_G(default_model(), xi, 0.5), DomainError);
  EXPECT_THROW(grad_G(default_model(), xi, 0.5), DomainError);
}

TEST(EvalG, MatchesPhiComposedFromStretches) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  std::uniform_real_distribution<double> r(0.01, 1.0);
  const auto m = default_model();
  for (int k = 0; k < 200; ++k) {
    const GammaTriple g{u(rng), u(rng), 0.0};
    const GammaTriple G{g.v1, g.v2, g.v2};
    const double rho = r(rng);
    const auto om = omega(G, rho);
    XiVector xi;
    for (std::size_t i = 0; i < 7; ++i) xi[i] = om[i];
    const double expect = phi_oracle(G.v1, G.v2, G.v3);
    EXPECT_NEAR(eval_G(m, xi, rho), expect, 1e-12 * expect);
    EXPECT_NEAR(eval_Phi(m, G.v1, G.v2, G.v3), expect, 1e-12 * expect);
  }
}

TEST(GradG, Component7AtIdentity) {
  XiVector xi;
  xi.xi.fill(1.0);
  EXPECT_DOUBLE_EQ(grad_G(default_model(), xi, 1.0)[6], 1.0);
}

TEST(GradG, SymmetricComponents) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const XiVector xi = random_xi(rng);
    const auto g = grad_G(default_model(), xi, 0.4);
    EXPECT_EQ(g[1], g[2]);
  }
}

TEST(GradG, MatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.05, 1.0);
  const auto m = default_model();
  for (int k = 0; k < 100; ++k) {
    const XiVector xi = random_xi(rng);
    const double rho = r(rng);
    const auto g = grad_G(m, xi, rho);
    const auto h2 = hess_diag_G(m, xi, rho);
    for (std::size_t i = 0; i < 7; ++i) {
      const double step = 1e-6 * std::max(1.0, std::abs(xi[i]));
      XiVector a = xi, b = xi;
      a[i] += step;
      b[i] -= step;
      const double fd = (eval_G(m, a, rho) - eval_G(m, b, rho)) / (2 * step);
      EXPECT_LE(std::abs(fd - g[i]), 1e-6 * std::max(1.0, std::abs(g[i]))) << "component " << i;
      const double fd2 = (grad_G(m, a, rho)[i] - grad_G(m, b, rho)[i]) / (2 * step);
      EXPECT_LE(std::abs(fd2 - h2[i]), 1e-6 * std::max(1.0, std::abs(h2[i]))) << "component " << i;
    }
  }
}

TEST(Audit, DefaultModelPassesEverything) {
  const auto rep = audit_assumptions(default_model());
  EXPECT_TRUE(rep.all_passed()) << rep.to_text();
  for (const char* a : {"A1", "A2", "A3", "A4", "psi"}) EXPECT_TRUE(rep.passed(a)) << a;
}

TEST(Audit, QuadraticHFailsA1) {
  auto m = default_model();
  m.h = [](double d) { return Jet{d * d, 2 * d, 2}; };
  const auto rep = audit_assumptions(m);
  EXPECT_FALSE(rep.passed("A1"));
  EXPECT_TRUE(rep.passed("A2"));
}

TEST(Audit, CubicPhiFailsA2) {
  auto m = default_model();
  m.phi = [](double x) { return Jet{x * x * x, 3 * x * x, 6 * x}; };
  const auto rep = audit_assumptions(m);
  EXPECT_FALSE(rep.passed("A2"));
  bool witness_negative = false;
  for (const auto& e : rep.entries) {
    if (e.assumption == "A2" && !e.pass && e.check == "phi'' >= 0") witness_negative = e.witness_x < 0;
  }
  EXPECT_TRUE(witness_negative);
}

TEST(Audit, InconsistentPsiIsCaught) {
  auto m = default_model();
  m.psi = [](double x) { return Jet{2 * x * x, 4 * x, 4}; };
  const auto rep = audit_assumptions(m);
  EXPECT_FALSE(rep.passed("psi"));
  EXPECT_FALSE(rep.passed("A3"));  // c1 no longer shared
}

TEST(Audit, WrongGrowthExponentFailsA3) {
  auto m = default_model();
  m.q = 3.0;  // g really grows like x^2
  EXPECT_FALSE(audit_assumptions(m).passed("A3"));
}

TEST(Convexity, MidpointAndQuarterPoints) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> r(0.05, 1.0);
  const auto m = default_model();
  for (int k = 0; k < 1000; ++k) {
    const XiVector a = random_xi(rng);
    const XiVector b = random_xi(rng);
    const double rho = r(rng);
    for (double t : {0.25, 0.5, 0.75}) {
      const XiVector mid = t * a + (1 - t) * b;
      const double gap = t * eval_G(m, a, rho) + (1 - t) * eval_G(m, b, rho) - eval_G(m, mid, rho);
      EXPECT_GE(gap, -1e-12);
    }
  }
}
