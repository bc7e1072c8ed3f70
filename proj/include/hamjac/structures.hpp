#pragma once

/// Hamiltonian dynamics on T*Q x R for the three supported structures.
///
/// Sign conventions: omega = dq^i ^ dp_i, Omega_H = dq^i ^ dp_i + dH ^ dt,
/// contact form eta = ds - p_i dq^i. With these, the fields reproduce
///
///   symplectic:    q' = H_p,  p' = -H_q,              s' = 0
///   cosymplectic:  q' = H_p,  p' = -H_q,              s' = 1
///   contact:       q' = H_p,  p' = -H_q - p H_s,      s' = p.H_p - H

#include <algorithm>
#include <cmath>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/phase/hamiltonian.hpp"
#include "hamjac/phase/point.hpp"

namespace hamjac {

/// Threshold on |dH/ds| below which a Hamiltonian counts as s-independent.
inline constexpr double kTimeIndependenceTolerance = 1e-12;

namespace detail {

inline TangentValue field_from_gradient(StructureKind kind, const ExtendedPoint& x, std::span<const double> g,
                                        double h_value) {
  const std::size_t n = x.dimension();
  TangentValue v = TangentValue::zero(n);
  const double h_s = g[2 * n];
  for (std::size_t i = 0; i < n; ++i) {
    v.dq[i] = g[n + i];
    v.dp[i] = -g[i];
  }
  switch (kind) {
    case StructureKind::symplectic: v.ds = 0.0; break;
    case StructureKind::cosymplectic: v.ds = 1.0; break;
    case StructureKind::contact: {
      double pairing = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v.dp[i] -= x.p[i] * h_s;
        pairing += x.p[i] * g[n + i];
      }
      v.ds = pairing - h_value;
      break;
    }
  }
  return v;
}

}  // namespace detail

/// X_H with i_X omega = dH. Rejects s-dependent H.
inline TangentValue symplectic_field(const HamiltonianFunction& h, const ExtendedPoint& x) {
  const auto g = h.gradient(x);
  if (std::abs(g.back()) >= kTimeIndependenceTolerance)
    throw TimeDependenceError("symplectic field requested for a Hamiltonian with dH/ds = " + format_real(g.back()));
  return detail::field_from_gradient(StructureKind::symplectic, x, g, 0.0);
}

/// Reeb field R_H of (dt, Omega_H).
inline TangentValue cosymplectic_reeb(const HamiltonianFunction& h, const ExtendedPoint& x) {
  return detail::field_from_gradient(StructureKind::cosymplectic, x, h.gradient(x), 0.0);
}

/// Contact Hamiltonian field X_H, characterised by eta(X_H) = -H.
inline TangentValue contact_field(const HamiltonianFunction& h, const ExtendedPoint& x) {
  return detail::field_from_gradient(StructureKind::contact, x, h.gradient(x), h(x));
}

inline TangentValue hamiltonian_field(StructureKind kind, const HamiltonianFunction& h, const ExtendedPoint& x) {
  switch (kind) {
    case StructureKind::symplectic: return symplectic_field(h, x);
    case StructureKind::cosymplectic: return cosymplectic_reeb(h, x);
    case StructureKind::contact: return contact_field(h, x);
  }
  throw InvalidArgument("unknown structure kind");
}

struct ContractReport {
  /// <ds, X> for symplectic and cosymplectic (dt), eta(X_H) for contact.
  double eta_pairing = 0.0;
  /// Max over the 2n+1 coordinate directions of the defining 1-form equation:
  /// i_X omega - dH (symplectic), i_R Omega_H (cosymplectic),
  /// flat(X_H) + (R(H) + H) eta - dH (contact).
  double omega_defect = 0.0;
  /// |eta(X_H) + H| for contact, else 0.
  double hamiltonian_pairing_defect = 0.0;
  /// max(1, |H|, |p.H_p|): the rounding scale of eta(X_H) + H.
  double pairing_scale = 1.0;

  double relative_pairing_defect() const { return hamiltonian_pairing_defect / pairing_scale; }
};

/// Omega_H = sum dq^i ^ dp_i + dH ^ dt as a (2n+1)^2 matrix M with
/// Omega_H(u, v) = u^T M v, in the flat coordinate order.
inline std::vector<std::vector<double>> cosymplectic_two_form(std::size_t n, std::span<const double> dh) {
  const std::size_t d = 2 * n + 1;
  std::vector<std::vector<double>> m(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][n + i] += 1.0;
    m[n + i][i] -= 1.0;
  }
  const std::size_t t = 2 * n;
  for (std::size_t a = 0; a < d; ++a) {
    m[a][t] += dh[a];
    m[t][a] -= dh[a];
  }
  return m;
}

inline ContractReport contract_check(StructureKind kind, const HamiltonianFunction& h, const ExtendedPoint& x) {
  const std::size_t n = x.dimension();
  const std::size_t d = 2 * n + 1;
  const auto g = h.gradient(x);
  const double hv = h(x);
  ContractReport r;

  switch (kind) {
    case StructureKind::symplectic: {
      const auto v = symplectic_field(h, x);
      r.eta_pairing = v.ds;
      // i_X (dq ^ dp) = X_q dp - X_p dq
      for (std::size_t i = 0; i < n; ++i) {
        r.omega_defect = std::max(r.omega_defect, std::abs(-v.dp[i] - g[i]));
        r.omega_defect = std::max(r.omega_defect, std::abs(v.dq[i] - g[n + i]));
      }
      r.omega_defect = std::max(r.omega_defect, std::abs(g[2 * n]));
      break;
    }
    case StructureKind::cosymplectic: {
      const auto v = cosymplectic_reeb(h, x);
      r.eta_pairing = v.ds;
      const auto field = v.flat();
      const auto m = cosymplectic_two_form(n, g);
      for (std::size_t b = 0; b < d; ++b) {
        double contraction = 0.0;
        for (std::size_t a = 0; a < d; ++a) contraction += field[a] * m[a][b];
        r.omega_defect = std::max(r.omega_defect, std::abs(contraction));
      }
      break;
    }
    case StructureKind::contact: {
      const auto v = contact_field(h, x);
      double p_dq = 0.0, p_hp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p_dq += x.p[i] * v.dq[i];
        p_hp += x.p[i] * g[n + i];
      }
      const double eta_x = v.ds - p_dq;
      r.eta_pairing = eta_x;
      r.hamiltonian_pairing_defect = std::abs(eta_x + hv);
      r.pairing_scale = std::max({1.0, std::abs(hv), std::abs(p_hp)});
      // flat(X) = i_X d(eta) + eta(X) eta with d(eta) = dq ^ dp; compare with
      // -(R(H) + H) eta + dH where R = d/ds.
      const double coeff = -(g[2 * n] + hv);
      for (std::size_t i = 0; i < n; ++i) {
        const double lhs_q = -v.dp[i] - eta_x * x.p[i];
        const double rhs_q = -coeff * x.p[i] + g[i];
        const double lhs_p = v.dq[i];
        const double rhs_p = g[n + i];
        r.omega_defect = std::max({r.omega_defect, std::abs(lhs_q - rhs_q), std::abs(lhs_p - rhs_p)});
      }
      r.omega_defect = std::max(r.omega_defect, std::abs(eta_x - (coeff + g[2 * n])));
      break;
    }
  }
  return r;
}

/// {f, g} = sum_i (df/dq^i dg/dp_i - df/dp_i dg/dq^i).
inline double poisson_bracket(const HamiltonianFunction& f, const HamiltonianFunction& g, const ExtendedPoint& x) {
  const std::size_t n = x.dimension();
  const auto df = f.gradient(x);
  const auto dg = g.gradient(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += df[i] * dg[n + i] - df[n + i] * dg[i];
  return sum;
}

}  // namespace hamjac
