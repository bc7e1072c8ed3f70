#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hamjac/phase/point.hpp"

namespace hamjac {

struct TrajectorySample {
  double tau = 0.0;
  ExtendedPoint x;
  double hamiltonian = std::numeric_limits<double>::quiet_NaN();
  /// Per-sample diagnostic; NaN when none was computed.
  double defect = std::numeric_limits<double>::quiet_NaN();
};

/// Time-sampled curve in T*Q x R with strictly monotone, uniformly spaced tau.
struct Trajectory {
  StructureKind kind = StructureKind::symplectic;
  std::vector<TrajectorySample> samples;

  std::size_t dimension() const { return samples.empty() ? 0 : samples.front().x.dimension(); }
  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }
};

}  // namespace hamjac
