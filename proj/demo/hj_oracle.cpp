// gamma = sqrt(2E - q^2) solves the HJ equation of the harmonic oscillator,
// so lifted projected curves coincide with the true integral curves.
#include <cstdio>

#include "hamjac/hamjac.hpp"

int main() {
  using namespace hamjac;
  const HamiltonianFunction h("0.5*(p1^2 + q1^2)", 1);
  const Section gamma({"sqrt(2*E - q1^2)"}, 1, {{"E", 2.0}});
  for (double q : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
    const double qq[] = {q};
    const auto r = relatedness_defect(StructureKind::cosymplectic, h, gamma, qq, 0.0);
    std::printf("q=%5.2f residual=% .3e relatedness=%.3e\n", q, r.residual[0], r.relatedness_defect);
  }
  const double q0[] = {0.0};
  const auto cmp = compare_lifted(StructureKind::cosymplectic, h, gamma, q0, 0.0, {0.0, 1.0});
  std::printf("max point deviation over [0, 1]: %.3e\n", cmp.max_point_deviation);
}
