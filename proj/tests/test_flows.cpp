#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hamjac/hamjac.hpp"

using namespace hamjac;

namespace {

IntegratorConfig tight(std::size_t intervals = 200) {
  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;
  cfg.output_intervals = intervals;
  return cfg;
}

std::vector<double> one(double v) { return {v}; }

}  // namespace

TEST(Integrate, HarmonicPeriod) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  const auto traj = integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0),
                              {0.0, 2.0 * std::numbers::pi}, tight());
  ASSERT_EQ(traj.samples.size(), 201u);
  EXPECT_NEAR(traj.back().x.q[0], 1.0, 1e-6);
  EXPECT_NEAR(traj.back().x.p[0], 0.0, 1e-6);
  for (const auto& smp : traj.samples) {
    EXPECT_NEAR(smp.x.q[0], std::cos(smp.tau), 1e-8);
    EXPECT_NEAR(smp.hamiltonian, 0.5, 1e-9);
  }
}

TEST(Integrate, FreeParticle) {
  const HamiltonianFunction free("p1^2/2", 1);
  const auto traj = integrate(StructureKind::symplectic, free, ExtendedPoint({0.0}, {2.0}, 0.0), {0.0, 3.0}, tight());
  EXPECT_NEAR(traj.back().x.q[0], 6.0, 1e-12);
  EXPECT_EQ(traj.back().x.p[0], 2.0);
}

TEST(Integrate, DampedDecay) {
  const auto h = models::damped_hamiltonian(1.0, 0.1, "0.5*q1^2");
  const auto traj = integrate(StructureKind::contact, h, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 10.0}, tight());
  for (const auto& smp : traj.samples) EXPECT_NEAR(smp.hamiltonian, 0.5 * std::exp(-0.1 * smp.tau), 1e-6);
  EXPECT_NEAR(traj.back().hamiltonian, 0.5 * std::exp(-1.0), 1e-6);
}

TEST(Integrate, CosymplecticTimeAdvancesWithTau) {
  const auto h = models::trig_hamiltonian(0.5, 2.0);
  const auto traj = integrate(StructureKind::cosymplectic, h, ExtendedPoint({0.3}, {0.2}, 1.5), {0.0, 4.0}, tight());
  for (const auto& smp : traj.samples) EXPECT_NEAR(smp.x.s, 1.5 + smp.tau, 1e-12);
}

TEST(Integrate, SymplecticRejectsTimeDependentHamiltonian) {
  const auto h = models::trig_hamiltonian(1.0, 1.0);
  EXPECT_THROW((void)integrate(StructureKind::symplectic, h, ExtendedPoint({1.0}, {1.0}, 0.5), {0.0, 1.0}),
               TimeDependenceError);
}

TEST(Integrate, SingularityGuardStopsWithLastState) {
  HamiltonianFunction h("p1", 1);
  h.declare_q_singular();
  try {
    (void)integrate(StructureKind::symplectic, h, ExtendedPoint({-1.0}, {0.0}, 0.0), {0.0, 2.0});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.reason(), IntegrationError::Reason::singularity);
    EXPECT_LT(e.last_tau(), 1.0);
    ASSERT_EQ(e.last_state().size(), 3u);
    EXPECT_LT(e.last_state()[0], 0.0);
  }
}

TEST(Integrate, DomainErrorBecomesSingularity) {
  // dq = -1 carries q below 0, where sqrt(q1) has no derivative.
  const HamiltonianFunction h("-p1 + q1*sqrt(q1)", 1);
  try {
    (void)integrate(StructureKind::symplectic, h, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 2.0});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.reason(), IntegrationError::Reason::singularity);
    EXPECT_GT(e.last_state()[0], 0.0);
  }
}

TEST(Integrate, MaxStepsExceeded) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  try {
    (void)integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 100.0}, cfg);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.reason(), IntegrationError::Reason::max_steps);
  }
}

TEST(Integrate, RejectsInvalidConfig) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  IntegratorConfig cfg;
  cfg.rtol = -1.0;
  EXPECT_THROW((void)integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 1.0}, cfg),
               InvalidArgument);
}

TEST(Integrate, BackwardTime) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  const auto traj = integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, -1.0}, tight());
  EXPECT_NEAR(traj.back().x.q[0], std::cos(1.0), 1e-10);
  EXPECT_NEAR(traj.back().x.p[0], std::sin(1.0), 1e-10);
}

TEST(Rk4, FourthOrderConvergence) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  auto error = [&](double step) {
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::rk4_fixed;
    cfg.step = step;
    cfg.output_intervals = 1;
    const auto t = integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 1.0}, cfg);
    return std::hypot(t.back().x.q[0] - std::cos(1.0), t.back().x.p[0] + std::sin(1.0));
  };
  const double ratio = error(0.1) / error(0.05);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Characteristics, WinternitzSmorodinskyEquilibrium) {
  // k = omega = 1: q = 1 with gamma = 0 is a fixed point of q'' = 1/q^3 - q.
  const auto ws = models::ws_hamiltonian(1.0, "1");
  const auto traj = characteristics(StructureKind::cosymplectic, ws, one(1.0), one(0.0), 0.0, {0.0, 10.0}, tight());
  for (const auto& smp : traj.samples) {
    EXPECT_NEAR(smp.x.q[0], 1.0, 1e-12);
    EXPECT_NEAR(smp.x.p[0], 0.0, 1e-12);
  }
}

TEST(Characteristics, CosymplecticMatchesReebFlow) {
  const auto ws = models::ws_hamiltonian(1.0, "1 + 0.3*cos(t)");
  const auto ch = characteristics(StructureKind::cosymplectic, ws, one(1.2), one(0.4), 0.0, {0.0, 5.0}, tight());
  const auto fl = integrate(StructureKind::cosymplectic, ws, ExtendedPoint({1.2}, {0.4}, 0.0), {0.0, 5.0}, tight());
  for (std::size_t k = 0; k < ch.samples.size(); ++k)
    EXPECT_LT(max_abs_difference(ch.samples[k].x.flat(), fl.samples[k].x.flat()), 1e-8);
}

TEST(Characteristics, ContactMatchesContactFlow) {
  const auto h = models::damped_hamiltonian(1.0, 0.1, "0.5*q1^2");
  const auto ch = characteristics(StructureKind::contact, h, one(1.0), one(0.5), 0.2, {0.0, 5.0}, tight());
  const auto fl = integrate(StructureKind::contact, h, ExtendedPoint({1.0}, {0.5}, 0.2), {0.0, 5.0}, tight());
  for (std::size_t k = 0; k < ch.samples.size(); ++k)
    EXPECT_LT(max_abs_difference(ch.samples[k].x.flat(), fl.samples[k].x.flat()), 1e-8);
}

TEST(Characteristics, TrigAlphaZeroClosedForm) {
  const auto h = models::trig_hamiltonian(0.0, 1.0);
  const double q0 = 0.7, g0 = -0.4;
  const auto traj = characteristics(StructureKind::cosymplectic, h, one(q0), one(g0), 0.0, {0.0, 6.0}, tight());
  for (const auto& smp : traj.samples) {
    EXPECT_NEAR(smp.x.q[0], q0 * std::cos(smp.tau) + g0 * std::sin(smp.tau), 1e-9);
    EXPECT_NEAR(smp.x.p[0], g0 * std::cos(smp.tau) - q0 * std::sin(smp.tau), 1e-9);
  }
}

TEST(CompareLifted, ExactSolutionStaysOnSection) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  const Section harmonic({"sqrt(2*E - q1^2)"}, 1, {{"E", 2.0}});
  // Stay on the upper half of the energy circle: q runs from -1 towards +1.9.
  const auto r = compare_lifted(StructureKind::symplectic, ho, harmonic, one(-1.0), 0.0, {0.0, 1.5}, tight());
  EXPECT_LT(r.max_point_deviation, 1e-8);
  EXPECT_EQ(r.lifted.samples.size(), r.full.samples.size());
}

TEST(CompareLifted, ZeroHamiltonian) {
  const HamiltonianFunction zero("0", 1);
  const Section g({"sin(q1) + 2"}, 1);
  const auto r = compare_lifted(StructureKind::cosymplectic, zero, g, one(0.3), 0.0, {0.0, 2.0}, tight());
  EXPECT_LT(r.max_point_deviation, 1e-12);
  EXPECT_NEAR(r.full.back().x.s, 2.0, 1e-12);
}

TEST(CompareLifted, NonSolutionDrifts) {
  // H = p^2/2, gamma = q: the projected flow is q' = q, so the lifted curve is
  // (e^tau, e^tau) while the full flow is (1 + tau, 1). At tau = 1 the
  // deviation is e - 1 in p and e - 2 in q.
  const HamiltonianFunction free("p1^2/2", 1);
  const Section ident({"q1"}, 1);
  const auto r = compare_lifted(StructureKind::symplectic, free, ident, one(1.0), 0.0, {0.0, 1.0}, tight());
  EXPECT_NEAR(r.lifted.back().x.q[0] - r.full.back().x.q[0], std::numbers::e - 2.0, 1e-9);
  EXPECT_NEAR(r.max_point_deviation, std::numbers::e - 1.0, 1e-9);
}

TEST(CompareLifted, WinternitzSmorodinskyPinneySection) {
  // k = omega = 1: the equilibrium q = 1 lies on gamma = 0 and stays there.
  const auto ws = models::ws_hamiltonian(1.0, "1");
  const Section zero({"0"}, 1);
  const auto r = compare_lifted(StructureKind::cosymplectic, ws, zero, one(1.0), 0.0, {0.0, 3.0}, tight());
  EXPECT_LT(r.max_point_deviation, 1e-12);
}

TEST(Dissipation, HarmonicLongRun) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  const auto traj = with_dissipation_defect(
      integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 100.0}, tight(2000)), ho);
  double worst = 0.0;
  for (const auto& smp : traj.samples) worst = std::max(worst, smp.defect);
  EXPECT_LT(worst, 1e-7);
}

TEST(Dissipation, CosymplecticAndContactLaws) {
  const auto trig = models::trig_hamiltonian(0.5, 1.0);
  const auto t1 = integrate(StructureKind::cosymplectic, trig, ExtendedPoint({0.5}, {0.3}, 0.0), {0.0, 5.0}, tight(1000));
  for (double d : dissipation_diagnostic(StructureKind::cosymplectic, t1, trig)) EXPECT_LT(d, 1e-7);

  const auto damped = models::damped_hamiltonian(1.0, 0.3, "0.5*q1^2");
  const auto t2 = integrate(StructureKind::contact, damped, ExtendedPoint({1.0}, {0.2}, 0.0), {0.0, 5.0}, tight(1000));
  for (double d : dissipation_diagnostic(StructureKind::contact, t2, damped)) EXPECT_LT(d, 1e-7);
}

TEST(Dissipation, SampleDerivativeIsExactOnQuartics) {
  std::vector<double> tau, f;
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.2 * k;
    tau.push_back(t);
    f.push_back(t * t * t * t - 2.0 * t * t + t);
  }
  const auto d = detail::sample_derivative(tau, f);
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const double t = tau[k];
    EXPECT_NEAR(d[k], 4.0 * t * t * t - 4.0 * t + 1.0, 1e-10);
  }
}

TEST(Export, CsvFormat) {
  const HamiltonianFunction ho("0.5*(q1^2 + p1^2)", 1);
  IntegratorConfig cfg = tight(4);
  const auto traj = integrate(StructureKind::symplectic, ho, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 1.0}, cfg);
  std::ostringstream os;
  write_csv(os, traj, {nlohmann::json{{"command", "test"}}, 42});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "# hamjac " + std::string(kVersion));
  std::getline(is, line);
  EXPECT_EQ(line, "# manifest {\"command\":\"test\"}");
  std::getline(is, line);
  EXPECT_EQ(line, "# seed 42");
  std::getline(is, line);
  EXPECT_EQ(line, "tau,q1,p1,s,H,defect");
  EXPECT_EQ(csv_columns(2), "tau,q1,q2,p1,p2,s,H,defect");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    const auto& smp = traj.samples[rows];
    EXPECT_EQ(std::stod(cells[1]), smp.x.q[0]);  // 17 significant digits round-trip exactly
    EXPECT_EQ(std::stod(cells[4]), smp.hamiltonian);
    EXPECT_EQ(cells[5], "nan");
    ++rows;
  }
  EXPECT_EQ(rows, 5u);
}

TEST(Export, JsonFormat) {
  const auto h = models::damped_hamiltonian(1.0, 0.1, "0.5*q1^2");
  const auto traj = with_dissipation_defect(
      integrate(StructureKind::contact, h, ExtendedPoint({1.0}, {0.0}, 0.0), {0.0, 1.0}, tight(10)), h);
  const auto j = trajectory_to_json(traj, {nlohmann::json::object(), 7});
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["structure"], "contact");
  ASSERT_EQ(j["samples"].size(), 11u);
  EXPECT_EQ(j["samples"][3]["q"][0].get<double>(), traj.samples[3].x.q[0]);
  EXPECT_TRUE(j["samples"][3]["defect"].is_number());
}
