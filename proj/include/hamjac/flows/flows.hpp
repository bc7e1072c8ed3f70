#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/flows/integrator.hpp"
#include "hamjac/flows/trajectory.hpp"
#include "hamjac/hj.hpp"
#include "hamjac/phase/hamiltonian.hpp"
#include "hamjac/structures.hpp"

namespace hamjac {

struct TimeSpan {
  double begin = 0.0;
  double end = 1.0;
};

namespace detail {

inline StateGuard q_guard(const HamiltonianFunction& h, const IntegratorConfig& cfg) {
  if (!h.q_singular()) return {};
  const std::size_t n = h.arity();
  const double q_min = cfg.singularity_guard;
  return [n, q_min](std::span<const double> y) {
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(y[i]) < q_min) return false;
    return true;
  };
}

inline Trajectory to_trajectory(StructureKind kind, const HamiltonianFunction& h, const OdeSolution& sol) {
  Trajectory traj{kind, {}};
  traj.samples.reserve(sol.tau.size());
  for (std::size_t k = 0; k < sol.tau.size(); ++k) {
    TrajectorySample smp;
    smp.tau = sol.tau[k];
    smp.x = ExtendedPoint::from_flat(sol.state[k]);
    smp.hamiltonian = h(smp.x);
    traj.samples.push_back(std::move(smp));
  }
  return traj;
}

}  // namespace detail

/// Integral curve of the structure's Hamiltonian field starting at x0.
inline Trajectory integrate(StructureKind kind, const HamiltonianFunction& h, const ExtendedPoint& x0, TimeSpan span,
                            const IntegratorConfig& cfg = {}) {
  if (x0.dimension() != h.arity()) throw InvalidArgument("initial point dimension does not match Hamiltonian");
  if (kind == StructureKind::symplectic) (void)symplectic_field(h, x0);  // reject s-dependent H up front
  const OdeRhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const auto v = hamiltonian_field(kind, h, ExtendedPoint::from_flat(y));
    const auto f = v.flat();
    std::copy(f.begin(), f.end(), dy.begin());
  };
  const auto sol = solve_ode(rhs, x0.flat(), span.begin, span.end, cfg, detail::q_guard(h, cfg));
  return detail::to_trajectory(kind, h, sol);
}

/// Characteristic curves of the HJ equation of `kind`, with the momentum
/// slot identified with gamma along the curve: dq/dtau = a, ds/dtau = a_s,
/// d gamma/dtau = b (see hj_coefficients). The returned samples store gamma
/// in the p components.
inline Trajectory characteristics(StructureKind kind, const HamiltonianFunction& h, std::span<const double> q0,
                                  std::span<const double> gamma0, double s0, TimeSpan span,
                                  const IntegratorConfig& cfg = {}) {
  const std::size_t n = h.arity();
  if (q0.size() != n || gamma0.size() != n) throw InvalidArgument("characteristics: dimension mismatch");
  const OdeRhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const auto c = hj_coefficients(kind, h, ExtendedPoint::from_flat(y));
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] = c.a_q[i];
      dy[n + i] = c.b[i];
    }
    dy[2 * n] = c.a_s;
  };
  std::vector<double> y0(q0.begin(), q0.end());
  y0.insert(y0.end(), gamma0.begin(), gamma0.end());
  y0.push_back(s0);
  const auto sol = solve_ode(rhs, std::move(y0), span.begin, span.end, cfg, detail::q_guard(h, cfg));
  return detail::to_trajectory(kind, h, sol);
}

struct LiftComparison {
  double max_point_deviation = 0.0;
  /// Integral curve of the projected field, lifted through gamma.
  Trajectory lifted;
  /// Integral curve of the full field from gamma(q0, s0).
  Trajectory full;
};

/// Integrates X^gamma on Q x R, lifts the samples through gamma, and compares
/// them with the integral curve of X started at the lifted initial point.
/// Each sample's `defect` holds its max-norm deviation.
inline LiftComparison compare_lifted(StructureKind kind, const HamiltonianFunction& h, const Section& gamma,
                                     std::span<const double> q0, double s0, TimeSpan span,
                                     const IntegratorConfig& cfg = {}) {
  const std::size_t n = h.arity();
  if (gamma.dimension() != n || q0.size() != n) throw InvalidArgument("compare_lifted: dimension mismatch");

  const OdeRhs base_rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const auto v = projected_field(kind, h, gamma, y.first(n), y[n]);
    std::copy(v.dq.begin(), v.dq.end(), dy.begin());
    dy[n] = v.ds;
  };
  StateGuard base_guard;
  if (h.q_singular()) {
    const double q_min = cfg.singularity_guard;
    base_guard = [n, q_min](std::span<const double> y) {
      for (std::size_t i = 0; i < n; ++i)
        if (std::abs(y[i]) < q_min) return false;
      return true;
    };
  }
  std::vector<double> b0(q0.begin(), q0.end());
  b0.push_back(s0);
  const auto base = solve_ode(base_rhs, b0, span.begin, span.end, cfg, base_guard);

  LiftComparison out;
  out.lifted.kind = kind;
  for (std::size_t k = 0; k < base.tau.size(); ++k) {
    const auto& y = base.state[k];
    TrajectorySample smp;
    smp.tau = base.tau[k];
    smp.x = gamma.lift(std::span<const double>(y).first(n), y[n]);
    smp.hamiltonian = h(smp.x);
    out.lifted.samples.push_back(std::move(smp));
  }
  out.full = integrate(kind, h, gamma.lift(q0, s0), span, cfg);

  for (std::size_t k = 0; k < out.full.samples.size(); ++k) {
    const auto a = out.lifted.samples[k].x.flat();
    const auto b = out.full.samples[k].x.flat();
    const double dev = max_abs_difference(a, b);
    out.lifted.samples[k].defect = dev;
    out.full.samples[k].defect = dev;
    out.max_point_deviation = std::max(out.max_point_deviation, dev);
  }
  return out;
}

namespace detail {

/// dH/dtau from uniformly spaced samples: 5-point central differences in the
/// interior, 5-point one-sided stencils at the two ends on each side.
inline std::vector<double> sample_derivative(const std::vector<double>& tau, const std::vector<double>& f) {
  const std::size_t m = f.size();
  if (m < 5) throw InvalidArgument("need at least 5 samples to differentiate along a trajectory");
  const double h = (tau.back() - tau.front()) / static_cast<double>(m - 1);
  for (std::size_t k = 1; k < m; ++k)
    if (std::abs((tau[k] - tau[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw InvalidArgument("trajectory samples are not uniformly spaced");
  // Derivative at node x of the quartic through f[base..base+4].
  auto one_sided = [&](std::size_t base, double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      double w = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        if (j == i) continue;
        double term = 1.0 / (double(i) - double(j));
        for (std::size_t l = 0; l < 5; ++l)
          if (l != i && l != j) term *= (x - double(l)) / (double(i) - double(l));
        w += term;
      }
      acc += w * f[base + i];
    }
    return acc / h;
  };
  std::vector<double> d(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (k >= 2 && k + 2 < m)
      d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
    else if (k < 2)
      d[k] = one_sided(0, double(k));
    else
      d[k] = one_sided(m - 5, double(k - (m - 5)));
  }
  return d;
}

}  // namespace detail

/// Per-sample check of the structure's energy law along a trajectory:
///   symplectic    |H(x(tau)) - H(x(0))|
///   cosymplectic  |dH/dtau - dH/dt|
///   contact       |dH/dtau + H dH/dS|
/// with dH/dtau taken by finite differences over the samples. The rate laws
/// need at least 5 samples; shorter trajectories get NaN defects.
inline std::vector<double> dissipation_diagnostic(StructureKind kind, const Trajectory& traj,
                                                  const HamiltonianFunction& h) {
  const std::size_t m = traj.samples.size();
  std::vector<double> values(m), tau(m);
  for (std::size_t k = 0; k < m; ++k) {
    tau[k] = traj.samples[k].tau;
    values[k] = h(traj.samples[k].x);
  }
  std::vector<double> defect(m, 0.0);
  if (kind == StructureKind::symplectic) {
    for (std::size_t k = 0; k < m; ++k) defect[k] = std::abs(values[k] - values[0]);
    return defect;
  }
  if (m < 5) return std::vector<double>(m, std::numeric_limits<double>::quiet_NaN());
  const auto rate = detail::sample_derivative(tau, values);
  for (std::size_t k = 0; k < m; ++k) {
    const double h_s = h.gradient(traj.samples[k].x).back();
    defect[k] = kind == StructureKind::cosymplectic ? std::abs(rate[k] - h_s) : std::abs(rate[k] + values[k] * h_s);
  }
  return defect;
}

/// Copy of `traj` with every sample's defect set from dissipation_diagnostic.
inline Trajectory with_dissipation_defect(Trajectory traj, const HamiltonianFunction& h) {
  const auto d = dissipation_diagnostic(traj.kind, traj, h);
  for (std::size_t k = 0; k < d.size(); ++k) traj.samples[k].defect = d[k];
  return traj;
}

}  // namespace hamjac
