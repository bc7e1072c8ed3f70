#pragma once

/// Geometric Hamilton-Jacobi machinery: project a Hamiltonian field along a
/// section gamma, lift it back with T(gamma), and measure how far the lift is
/// from the original field. In local coordinates the mismatch lives entirely
/// in the momentum components and equals the HJ residual.
///
/// All H-partials are evaluated at the lifted point (q, gamma(q, s), s).

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/phase/hamiltonian.hpp"
#include "hamjac/phase/point.hpp"
#include "hamjac/structures.hpp"

namespace hamjac {

/// T(gamma) applied to a base tangent v at (q, s).
inline TangentValue tangent_lift(const SectionJet& jet, const BaseTangent& v) {
  const std::size_t n = jet.value.size();
  if (v.dq.size() != n) throw InvalidArgument("base tangent dimension does not match section");
  TangentValue out{v.dq, std::vector<double>(n, 0.0), v.ds};
  for (std::size_t j = 0; j < n; ++j) {
    double acc = jet.ds[j] * v.ds;
    for (std::size_t i = 0; i < n; ++i) acc += jet.dq[j][i] * v.dq[i];
    out.dp[j] = acc;
  }
  return out;
}

inline TangentValue tangent_lift(const Section& gamma, std::span<const double> q, double s, const BaseTangent& v) {
  return tangent_lift(gamma.jet(q, s), v);
}

/// T(pi) o X o gamma: the full field at the lifted point with dp dropped.
inline BaseTangent projected_field(StructureKind kind, const HamiltonianFunction& h, const Section& gamma,
                                   std::span<const double> q, double s) {
  const auto full = hamiltonian_field(kind, h, gamma.lift(q, s));
  return {full.dq, full.ds};
}

/// Per component j: d gamma^j/ds + sum_i H_{p_i} d gamma^j/dq^i + H_{q^j}.
inline std::vector<double> hj_residual_cosymplectic(const HamiltonianFunction& h, const Section& gamma,
                                                    std::span<const double> q, double s) {
  const auto jet = gamma.jet(q, s);
  const std::size_t n = jet.value.size();
  const auto g = h.gradient(ExtendedPoint({q.begin(), q.end()}, jet.value, s));
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = jet.ds[j] + g[j];
    for (std::size_t i = 0; i < n; ++i) acc += g[n + i] * jet.dq[j][i];
    r[j] = acc;
  }
  return r;
}

/// Time-independent counterpart: sum_i H_{p_i} d gamma^j/dq^i + H_{q^j}.
/// The s-partial of gamma does not enter because the symplectic field has
/// no s-component.
inline std::vector<double> hj_residual_symplectic(const HamiltonianFunction& h, const Section& gamma,
                                                  std::span<const double> q, double s) {
  const auto jet = gamma.jet(q, s);
  const std::size_t n = jet.value.size();
  const auto g = h.gradient(ExtendedPoint({q.begin(), q.end()}, jet.value, s));
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = g[j];
    for (std::size_t i = 0; i < n; ++i) acc += g[n + i] * jet.dq[j][i];
    r[j] = acc;
  }
  return r;
}

/// Options for the contact residual. `frozen_s_partial` replaces every
/// d gamma^j/dS by a fixed constant (the damped-oscillator reduction fixes it
/// to 1) instead of differentiating gamma.
struct ContactResidualOptions {
  std::optional<double> frozen_s_partial;
};

/// Per component j:
///   gamma^j H_S + H_{q^j} + (sum_i gamma^i H_{p_i} - H) d gamma^j/dS
///     + sum_i H_{p_i} d gamma^j/dq^i
inline std::vector<double> hj_residual_contact(const HamiltonianFunction& h, const Section& gamma,
                                               std::span<const double> q, double s,
                                               const ContactResidualOptions& opts = {}) {
  const auto jet = gamma.jet(q, s);
  const std::size_t n = jet.value.size();
  const ExtendedPoint lifted({q.begin(), q.end()}, jet.value, s);
  const auto g = h.gradient(lifted);
  const double hv = h(lifted);
  double reeb_coeff = -hv;
  for (std::size_t i = 0; i < n; ++i) reeb_coeff += jet.value[i] * g[n + i];
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double gamma_s = opts.frozen_s_partial ? *opts.frozen_s_partial : jet.ds[j];
    double acc = jet.value[j] * g[2 * n] + g[j] + reeb_coeff * gamma_s;
    for (std::size_t i = 0; i < n; ++i) acc += g[n + i] * jet.dq[j][i];
    r[j] = acc;
  }
  return r;
}

inline std::vector<double> hj_residual(StructureKind kind, const HamiltonianFunction& h, const Section& gamma,
                                       std::span<const double> q, double s) {
  switch (kind) {
    case StructureKind::symplectic: return hj_residual_symplectic(h, gamma, q, s);
    case StructureKind::cosymplectic: return hj_residual_cosymplectic(h, gamma, q, s);
    case StructureKind::contact: return hj_residual_contact(h, gamma, q, s);
  }
  throw InvalidArgument("unknown structure kind");
}

struct HJReport {
  std::vector<double> residual;
  /// max |T(gamma)(X^gamma) - X o gamma| over all 2n+1 components.
  double relatedness_defect = 0.0;
  /// max over the dq and ds components alone; zero up to rounding.
  double base_defect = 0.0;
  double closedness_defect = 0.0;
  /// Componentwise momentum mismatch T(gamma)(X^gamma)_p - (X o gamma)_p.
  std::vector<double> momentum_mismatch;
};

inline HJReport relatedness_defect(StructureKind kind, const HamiltonianFunction& h, const Section& gamma,
                                   std::span<const double> q, double s) {
  const auto jet = gamma.jet(q, s);
  const ExtendedPoint lifted({q.begin(), q.end()}, jet.value, s);
  const auto full = hamiltonian_field(kind, h, lifted);
  const auto lifted_field = tangent_lift(jet, BaseTangent{full.dq, full.ds});

  const std::size_t n = lifted.dimension();
  HJReport r;
  r.residual = hj_residual(kind, h, gamma, q, s);
  r.closedness_defect = closedness_defect(jet);
  r.momentum_mismatch.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.base_defect = std::max(r.base_defect, std::abs(lifted_field.dq[i] - full.dq[i]));
    r.momentum_mismatch[i] = lifted_field.dp[i] - full.dp[i];
    r.relatedness_defect = std::max(r.relatedness_defect, std::abs(r.momentum_mismatch[i]));
  }
  r.base_defect = std::max(r.base_defect, std::abs(lifted_field.ds - full.ds));
  r.relatedness_defect = std::max(r.relatedness_defect, r.base_defect);
  return r;
}

/// Coefficients of the quasi-linear HJ equation written as
///   a_s d gamma^j/ds + sum_i a_i d gamma^j/dq^i = b_j
/// at (q, gamma, s). Its characteristics are dq/dtau = a, ds/dtau = a_s,
/// d gamma/dtau = b.
struct QuasiLinearCoefficients {
  std::vector<double> a_q;
  double a_s = 0.0;
  std::vector<double> b;
};

inline QuasiLinearCoefficients hj_coefficients(StructureKind kind, const HamiltonianFunction& h,
                                               const ExtendedPoint& lifted) {
  const std::size_t n = lifted.dimension();
  const auto g = h.gradient(lifted);
  QuasiLinearCoefficients c{std::vector<double>(g.begin() + static_cast<std::ptrdiff_t>(n),
                                                g.begin() + static_cast<std::ptrdiff_t>(2 * n)),
                            0.0, std::vector<double>(n)};
  switch (kind) {
    case StructureKind::symplectic:
      c.a_s = 0.0;
      for (std::size_t j = 0; j < n; ++j) c.b[j] = -g[j];
      break;
    case StructureKind::cosymplectic:
      c.a_s = 1.0;
      for (std::size_t j = 0; j < n; ++j) c.b[j] = -g[j];
      break;
    case StructureKind::contact: {
      c.a_s = -h(lifted);
      for (std::size_t i = 0; i < n; ++i) c.a_s += lifted.p[i] * g[n + i];
      for (std::size_t j = 0; j < n; ++j) c.b[j] = -(g[j] + lifted.p[j] * g[2 * n]);
      break;
    }
  }
  return c;
}

}  // namespace hamjac
