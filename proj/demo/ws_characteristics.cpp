// Characteristics of the Winternitz-Smorodinsky HJ equation against the Reeb
// flow and the classical Pinney closed form.
#include <cmath>
#include <cstdio>

#include "hamjac/hamjac.hpp"

int main() {
  using namespace hamjac;
  const auto h = models::ws_hamiltonian(1.0, "1");
  IntegratorConfig cfg;
  cfg.output_intervals = 10;
  const double q0[] = {2.0}, g0[] = {0.0};
  const auto chars = characteristics(StructureKind::cosymplectic, h, q0, g0, 0.0, {0.0, 5.0}, cfg);
  const auto reeb = integrate(StructureKind::cosymplectic, h, ExtendedPoint({2.0}, {0.0}, 0.0), {0.0, 5.0}, cfg);

  // q(0) = 2, q'(0) = 0 with y1 = cos t, y2 = sin t: A = 4, B = 0, C = 1/4.
  models::PinneySpec spec;
  spec.form = models::ClassicalPinneyForm{4.0, 0.0, 0.25};
  const models::PinneySolution pinney(spec);

  std::printf("%6s %14s %14s %14s\n", "t", "q (chars)", "q (Reeb)", "q (Pinney)");
  for (std::size_t k = 0; k < chars.samples.size(); ++k)
    std::printf("%6.2f %14.10f %14.10f %14.10f\n", chars.samples[k].tau, chars.samples[k].x.q[0],
                reeb.samples[k].x.q[0], pinney(chars.samples[k].tau));
}
