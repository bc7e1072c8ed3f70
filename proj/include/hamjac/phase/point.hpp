#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamjac/errors.hpp"

namespace hamjac {

/// Which geometric structure on T*Q x R drives the dynamics. The third
/// coordinate s of a point is time t for cosymplectic systems and the
/// action-like variable S for contact systems; symplectic systems ignore it.
enum class StructureKind { symplectic, cosymplectic, contact };

inline std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::symplectic: return "symplectic";
    case StructureKind::cosymplectic: return "cosymplectic";
    case StructureKind::contact: return "contact";
  }
  return "unknown";
}

inline std::optional<StructureKind> parse_structure_kind(std::string_view name) {
  if (name == "symplectic") return StructureKind::symplectic;
  if (name == "cosymplectic") return StructureKind::cosymplectic;
  if (name == "contact") return StructureKind::contact;
  return std::nullopt;
}

/// Point (q^1..q^n, p_1..p_n, s) of the extended phase space.
///
/// Flat layout used throughout (gradients, ODE states): q at [0, n), p at
/// [n, 2n), s at 2n.
struct ExtendedPoint {
  std::vector<double> q;
  std::vector<double> p;
  double s = 0.0;

  ExtendedPoint() = default;
  ExtendedPoint(std::vector<double> q_, std::vector<double> p_, double s_)
      : q(std::move(q_)), p(std::move(p_)), s(s_) {
    if (q.empty() || q.size() != p.size())
      throw InvalidArgument("ExtendedPoint needs n >= 1 with |q| == |p|");
    for (double v : q)
      if (!std::isfinite(v)) throw InvalidArgument("ExtendedPoint: non-finite q");
    for (double v : p)
      if (!std::isfinite(v)) throw InvalidArgument("ExtendedPoint: non-finite p");
    if (!std::isfinite(s)) throw InvalidArgument("ExtendedPoint: non-finite s");
  }

  std::size_t dimension() const noexcept { return q.size(); }

  std::vector<double> flat() const {
    std::vector<double> out;
    out.reserve(2 * q.size() + 1);
    out.insert(out.end(), q.begin(), q.end());
    out.insert(out.end(), p.begin(), p.end());
    out.push_back(s);
    return out;
  }

  static ExtendedPoint from_flat(std::span<const double> x) {
    if (x.size() < 3 || x.size() % 2 == 0)
      throw InvalidArgument("flat extended point must have odd length >= 3");
    const std::size_t n = (x.size() - 1) / 2;
    return ExtendedPoint({x.begin(), x.begin() + n}, {x.begin() + n, x.begin() + 2 * n}, x[2 * n]);
  }

  friend bool operator==(const ExtendedPoint&, const ExtendedPoint&) = default;
};

/// Tangent vector (dq, dp, ds) at an extended point.
struct TangentValue {
  std::vector<double> dq;
  std::vector<double> dp;
  double ds = 0.0;

  std::size_t dimension() const noexcept { return dq.size(); }

  static TangentValue zero(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0}; }

  std::vector<double> flat() const {
    std::vector<double> out(dq);
    out.insert(out.end(), dp.begin(), dp.end());
    out.push_back(ds);
    return out;
  }

  friend bool operator==(const TangentValue&, const TangentValue&) = default;
};

/// Tangent vector (dq, ds) to the base Q x R.
struct BaseTangent {
  std::vector<double> dq;
  double ds = 0.0;
};

/// Max-norm distance between two flat vectors of equal length.
inline double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace hamjac
