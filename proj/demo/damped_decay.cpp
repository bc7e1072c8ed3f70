// Damped oscillator as a contact system: H decays as H(0) e^{-alpha tau}.
#include <cmath>
#include <cstdio>

#include "hamjac/hamjac.hpp"

int main() {
  using namespace hamjac;
  const double alpha = 0.1;
  const auto h = models::damped_hamiltonian(1.0, alpha, "0.5*q1^2");
  IntegratorConfig cfg;
  cfg.output_intervals = 10;
  const auto traj = integrate(StructureKind::contact, h, ExtendedPoint({1.0}, {1.0}, 0.0), {0.0, 10.0}, cfg);
  const double h0 = traj.front().hamiltonian;
  std::printf("%6s %12s %12s %12s\n", "tau", "q", "H", "H0*exp(-at)");
  for (const auto& smp : traj.samples)
    std::printf("%6.2f %12.8f %12.8f %12.8f\n", smp.tau, smp.x.q[0], smp.hamiltonian, h0 * std::exp(-alpha * smp.tau));
}
