#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hamjac/hamjac.hpp"

using namespace hamjac;

TEST(ExtendedPoint, Invariants) {
  EXPECT_THROW(ExtendedPoint({}, {}, 0.0), InvalidArgument);
  EXPECT_THROW(ExtendedPoint({1.0}, {1.0, 2.0}, 0.0), InvalidArgument);
  EXPECT_THROW(ExtendedPoint({NAN}, {1.0}, 0.0), InvalidArgument);
  EXPECT_THROW(ExtendedPoint({1.0}, {1.0}, INFINITY), InvalidArgument);
  const ExtendedPoint x({1.0, 2.0}, {3.0, 4.0}, 5.0);
  EXPECT_EQ(x.flat(), (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_EQ(ExtendedPoint::from_flat(x.flat()), x);
}

TEST(Hamiltonian, RejectsMismatchedPoint) {
  const HamiltonianFunction h("q1*p1", 1);
  EXPECT_THROW((void)h(ExtendedPoint({1.0, 2.0}, {1.0, 2.0}, 0.0)), InvalidArgument);
}

TEST(Section, JetMatchesHandPartials) {
  const Section g({"q1*s"}, 1);
  const std::vector<double> q{2.0};
  const auto jet = g.jet(q, 3.0);
  EXPECT_DOUBLE_EQ(jet.value[0], 6.0);
  EXPECT_DOUBLE_EQ(jet.dq[0][0], 3.0);
  EXPECT_DOUBLE_EQ(jet.ds[0], 2.0);
}

TEST(Closedness, OneDimensionalIsAlwaysZero) {
  const Section g({"q1^3*sin(s) + exp(q1)"}, 1);
  const std::vector<double> q{0.7};
  EXPECT_EQ(closedness_defect(g, q, 1.3), 0.0);
}

TEST(Closedness, ExactGradientSection) {
  // gamma = grad W, W = q1^2 q2
  const Section g({"2*q1*q2", "q1^2"}, 2);
  for (double a : {-1.0, 0.3, 2.0})
    for (double b : {-0.5, 0.0, 4.0}) {
      const std::vector<double> q{a, b};
      EXPECT_EQ(closedness_defect(g, q, 0.0), 0.0);
    }
}

TEST(Closedness, RotationalSection) {
  const Section g({"q2", "-q1"}, 2);
  const std::vector<double> q{0.4, -1.2};
  EXPECT_DOUBLE_EQ(closedness_defect(g, q, 0.0), 2.0);
}

TEST(Closedness, GradientsOfRandomPotentialsAreClosed) {
  // W(q, s) = sum c_ab q1^a q2^b s + sin(q1 q2); gamma = grad_q W written out by hand.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> c(-1.0, 1.0), u(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double c1 = c(rng), c2 = c(rng), c3 = c(rng);
    const ParameterMap params{{"c1", c1}, {"c2", c2}, {"c3", c3}};
    // W = c1 q1^3 q2 s + c2 q1 q2^2 + c3 sin(q1*q2) + q2^4
    const Section g({"3*c1*q1^2*q2*s + c2*q2^2 + c3*q2*cos(q1*q2)",
                     "c1*q1^3*s + 2*c2*q1*q2 + c3*q1*cos(q1*q2) + 4*q2^3"},
                    2, params);
    for (int i = 0; i < 25; ++i) {
      const std::vector<double> q{u(rng), u(rng)};
      EXPECT_LT(closedness_defect(g, q, u(rng)), 1e-10);
    }
  }
}

TEST(SystemFile, ParsesAllFields) {
  const auto j = nlohmann::json::parse(R"({
    "n": 2, "structure": "contact", "hamiltonian": "p1^2/2 + p2^2/2 + a*s",
    "params": {"a": 0.25}, "section": ["q1", "q2"], "q_singular": true })");
  const auto d = parse_system_definition(j);
  EXPECT_EQ(d.n, 2u);
  EXPECT_EQ(d.structure, StructureKind::contact);
  EXPECT_DOUBLE_EQ(d.params.at("a"), 0.25);
  ASSERT_TRUE(d.section);
  EXPECT_EQ(d.section->size(), 2u);
  const auto h = d.make_hamiltonian();
  EXPECT_TRUE(h.q_singular());
  EXPECT_DOUBLE_EQ(h(ExtendedPoint({0, 0}, {1, 1}, 4.0)), 2.0);
  EXPECT_EQ(parse_system_definition(d.to_json()).to_json(), d.to_json());
}

TEST(SystemFile, RejectsMalformedDefinitions) {
  auto bad = [](const char* text) { return parse_system_definition(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad(R"({"structure": "contact", "hamiltonian": "0"})"), InvalidArgument);
  EXPECT_THROW(bad(R"({"n": 0, "structure": "contact", "hamiltonian": "0"})"), InvalidArgument);
  EXPECT_THROW(bad(R"({"n": 1, "structure": "kahler", "hamiltonian": "0"})"), InvalidArgument);
  EXPECT_THROW(bad(R"({"n": 1, "structure": "contact"})"), InvalidArgument);
  EXPECT_THROW(bad(R"({"n": 1, "structure": "contact", "hamiltonian": "0", "params": {"a": "x"}})"),
               InvalidArgument);
  EXPECT_THROW(bad(R"({"n": 2, "structure": "contact", "hamiltonian": "0", "section": ["q1"]})"), InvalidArgument);
}
