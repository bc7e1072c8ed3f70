#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hamjac/hamjac.hpp"

using namespace hamjac;

namespace {

std::vector<double> q1(double v) { return {v}; }

}  // namespace

TEST(TangentLift, Examples) {
  const Section gamma({"q1^2 + s"}, 1);
  const auto v = tangent_lift(gamma, q1(1.0), 0.0, BaseTangent{{1.0}, 0.0});
  EXPECT_EQ(v.dq[0], 1.0);
  EXPECT_DOUBLE_EQ(v.dp[0], 2.0);
  EXPECT_EQ(v.ds, 0.0);

  const auto w = tangent_lift(gamma, q1(1.0), 0.0, BaseTangent{{0.0}, 1.0});
  EXPECT_DOUBLE_EQ(w.dp[0], 1.0);
  EXPECT_EQ(w.ds, 1.0);

  const Section zero({"0"}, 1);
  const auto z = tangent_lift(zero, q1(3.0), 2.0, BaseTangent{{1.5}, -1.0});
  EXPECT_EQ(z.dp[0], 0.0);

  EXPECT_THROW((void)tangent_lift(gamma, q1(1.0), 0.0, BaseTangent{{1.0, 2.0}, 0.0}), InvalidArgument);
}

TEST(TangentLift, TwoDimensionalJacobian) {
  const Section gamma({"q2*s", "q1*q2"}, 2);
  const std::vector<double> q{2.0, 3.0};
  const auto v = tangent_lift(gamma, q, 0.5, BaseTangent{{1.0, -1.0}, 2.0});
  // dp1 = 0*1 + s*(-1) + q2*2;  dp2 = q2*1 + q1*(-1) + 0*2
  EXPECT_DOUBLE_EQ(v.dp[0], -0.5 + 6.0);
  EXPECT_DOUBLE_EQ(v.dp[1], 3.0 - 2.0);
}

TEST(ProjectedField, Examples) {
  const auto ws = models::ws_hamiltonian(1.0, "1");
  const Section g({"0.7*q1 - s"}, 1);
  const auto b = projected_field(StructureKind::cosymplectic, ws, g, q1(1.3), 0.4);
  EXPECT_DOUBLE_EQ(b.dq[0], 0.7 * 1.3 - 0.4);
  EXPECT_EQ(b.ds, 1.0);

  const double m = 2.0, a = 0.3;
  const auto damped = models::damped_hamiltonian(m, a, "0.5*q1^2");
  const double q = 0.6, s = 1.1, gv = 0.7 * q - s;
  const auto d = projected_field(StructureKind::contact, damped, g, q1(q), s);
  EXPECT_NEAR(d.dq[0], gv / m, 1e-15);
  EXPECT_NEAR(d.ds, gv * gv / (2 * m) - 0.5 * q * q - a * s, 1e-15);

  const HamiltonianFunction zero("0", 1);
  const auto z = projected_field(StructureKind::cosymplectic, zero, g, q1(q), s);
  EXPECT_EQ(z.dq[0], 0.0);
  EXPECT_EQ(z.ds, 1.0);
}

TEST(Residual, Examples) {
  // Harmonic oscillator, gamma = sqrt(2E - q^2) on the energy level E = 2.
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  const Section harmonic({"sqrt(2*E - q1^2)"}, 1, {{"E", 2.0}});
  for (double q : {-1.5, -0.3, 0.0, 0.8, 1.9})
    EXPECT_NEAR(hj_residual_symplectic(ho, harmonic, q1(q), 0.0)[0], 0.0, 1e-14);

  // Non-solution: H = p^2/2 with gamma = q gives residual q.
  const HamiltonianFunction free("p1^2/2", 1);
  const Section ident({"q1"}, 1);
  for (double q : {-2.0, 0.5, 3.0}) {
    EXPECT_DOUBLE_EQ(hj_residual_symplectic(free, ident, q1(q), 0.0)[0], q);
    EXPECT_DOUBLE_EQ(hj_residual_cosymplectic(free, ident, q1(q), 0.0)[0], q);
  }

  // Contact H = alpha S with constant gamma = c gives c alpha.
  const HamiltonianFunction lin("alpha*s", 1, {{"alpha", 0.25}});
  const Section constant({"c"}, 1, {{"c", 3.0}});
  EXPECT_DOUBLE_EQ(hj_residual_contact(lin, constant, q1(1.0), 2.0)[0], 0.75);
}

TEST(Residual, ZeroHamiltonianNeedsTimeIndependentGamma) {
  const HamiltonianFunction zero("0", 1);
  const Section g1({"sin(q1)"}, 1);
  EXPECT_EQ(hj_residual_cosymplectic(zero, g1, q1(0.7), 5.0)[0], 0.0);
  const Section g2({"q1*s"}, 1);
  EXPECT_DOUBLE_EQ(hj_residual_cosymplectic(zero, g2, q1(0.7), 5.0)[0], 0.7);
}

TEST(Residual, WinternitzSmorodinskyDisplay) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  const Section g({"a*q1^2 + b*s*q1 + c*cos(s)"}, 1, {{"a", 0.3}, {"b", -0.7}, {"c", 1.2}});
  for (double k : {0.0, 1.0, 2.5}) {
    const auto h = models::ws_hamiltonian(k, "1 + 0.5*sin(t)");
    for (int i = 0; i < 50; ++i) {
      const double q = u(rng), s = u(rng);
      const auto jet = g.jet(q1(q), s);
      const double gv = jet.value[0], gq = jet.dq[0][0], gs = jet.ds[0];
      const double w = 1.0 + 0.5 * std::sin(s);
      const double display = gs + gv * gq + (-k / (q * q * q) + w * w * q);
      EXPECT_NEAR(hj_residual_cosymplectic(h, g, q1(q), s)[0], display, 1e-12);
    }
  }
}

TEST(Residual, DampedDisplayIdentities) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 1.8);
  const Section g({"1 + 0.4*q1 - 0.2*s*q1"}, 1);
  const double m = 1.7, a = 0.15;
  const auto h = models::damped_hamiltonian(m, a, "0.5*q1^2 + 0.1*q1^4");
  for (int i = 0; i < 100; ++i) {
    const double q = u(rng), s = u(rng);
    const auto jet = g.jet(q1(q), s);
    const double gv = jet.value[0], gq = jet.dq[0][0], gs = jet.ds[0];
    const double v = 0.5 * q * q + 0.1 * q * q * q * q, vp = q + 0.4 * q * q * q;
    const double general = hj_residual_contact(h, g, q1(q), s)[0];
    EXPECT_NEAR(general, models::damped_hj_display(m, a, v, vp, s, gv, gq, gs), 1e-12);
    const double frozen = hj_residual_contact(h, g, q1(q), s, {.frozen_s_partial = 1.0})[0];
    EXPECT_NEAR(frozen, models::damped_hj_display(m, a, v, vp, s, gv, gq, 1.0), 1e-12);
    EXPECT_NEAR(frozen * m / gv, models::damped_hj_reduced_display(m, a, v, vp, s, gv, gq), 1e-11);
  }
}

TEST(Relatedness, MismatchEqualsResidual) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.4, 1.6);
  struct Case {
    StructureKind kind;
    HamiltonianFunction h;
    Section g;
  };
  const std::vector<Case> cases{
      {StructureKind::symplectic, HamiltonianFunction("0.5*(p1^2 + p2^2) + q1^2*q2", 2),
       Section({"q1*q2", "sin(q2) + q1"}, 2)},
      {StructureKind::cosymplectic, models::trig_hamiltonian(0.8, 1.3), Section({"q1*cos(s)"}, 1)},
      {StructureKind::cosymplectic, HamiltonianFunction("p1*p2 + s*q1^2 + q2", 2),
       Section({"q1 + s*q2", "q1*q2^2"}, 2)},
      {StructureKind::contact, models::damped_hamiltonian(1.0, 0.1, "0.5*q1^2"), Section({"exp(-s)*q1 + 1"}, 1)},
      {StructureKind::contact, HamiltonianFunction("0.5*(p1^2 + p2^2) + 0.3*s*p1 + q1*q2", 2),
       Section({"q1 - s", "q2*s + 2"}, 2)},
  };
  for (const auto& c : cases) {
    const std::size_t n = c.g.dimension();
    for (int i = 0; i < 40; ++i) {
      std::vector<double> q(n);
      for (auto& x : q) x = u(rng);
      const double s = u(rng);
      const auto r = relatedness_defect(c.kind, c.h, c.g, q, s);
      EXPECT_LT(r.base_defect, 1e-12);
      double worst = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_NEAR(r.momentum_mismatch[j], r.residual[j], 1e-12 * std::max(1.0, std::abs(r.residual[j])));
        worst = std::max(worst, std::abs(r.residual[j]));
      }
      EXPECT_NEAR(r.relatedness_defect, worst, 1e-12 * std::max(1.0, worst));
    }
  }
}

TEST(Relatedness, ExactSolutionHasZeroDefect) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  const Section harmonic({"sqrt(2*E - q1^2)"}, 1, {{"E", 2.0}});
  for (double q : {-1.2, 0.1, 1.7}) {
    const auto r = relatedness_defect(StructureKind::symplectic, ho, harmonic, q1(q), 0.0);
    EXPECT_LT(r.relatedness_defect, 1e-14);
    EXPECT_EQ(r.closedness_defect, 0.0);
  }
}

TEST(Coefficients, MatchFieldComponents) {
  const auto h = models::damped_hamiltonian(1.3, 0.2, "0.5*q1^2");
  const ExtendedPoint x({0.4}, {0.9}, 0.6);
  const auto c = hj_coefficients(StructureKind::contact, h, x);
  const auto f = contact_field(h, x);
  EXPECT_NEAR(c.a_q[0], f.dq[0], 1e-15);
  EXPECT_NEAR(c.a_s, f.ds, 1e-15);
  EXPECT_NEAR(c.b[0], f.dp[0], 1e-15);
  const auto cc = hj_coefficients(StructureKind::cosymplectic, h, x);
  EXPECT_EQ(cc.a_s, 1.0);
}
