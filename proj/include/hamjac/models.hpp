#pragma once

/// Worked example systems: the Winternitz-Smorodinsky oscillator, the
/// trigonometric time-dependent oscillator and the damped (contact)
/// oscillator, plus their closed-form solutions and residual oracles for
/// checking those closed forms.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/flows/integrator.hpp"
#include "hamjac/numerics/dual.hpp"
#include "hamjac/phase/expression.hpp"
#include "hamjac/phase/hamiltonian.hpp"
#include "hamjac/phase/system_file.hpp"

namespace hamjac::models {

// ---------------------------------------------------------------------------
// Hamiltonians

/// With k == 0 the inverse-square term is dropped, leaving the plain
/// oscillator without a singular locus at q = 0.
inline std::string ws_hamiltonian_text(std::string_view omega_expr, double k = 1.0) {
  const std::string kinetic = k == 0.0 ? "0.5*p1^2" : "0.5*(p1^2 + k/q1^2)";
  return kinetic + " + 0.5*(" + std::string(omega_expr) + ")^2*q1^2";
}

/// H = (p^2 + k/q^2)/2 + omega(t)^2 q^2 / 2, flagged q-singular when k != 0.
inline HamiltonianFunction ws_hamiltonian(double k, std::string_view omega_expr = "1", ParameterMap extra = {}) {
  extra["k"] = k;
  HamiltonianFunction h(ws_hamiltonian_text(omega_expr, k), 1, extra);
  h.declare_q_singular(k != 0.0);
  return h;
}

inline constexpr std::string_view kTrigHamiltonianText = "p1^2/2 + q1^2/2 + alpha*sin(w*s)*q1^2*p1^2/2";

/// H = p^2/2 + q^2/2 + alpha sin(w t) q^2 p^2 / 2.
inline HamiltonianFunction trig_hamiltonian(double alpha, double w) {
  return HamiltonianFunction(kTrigHamiltonianText, 1, {{"alpha", alpha}, {"w", w}});
}

inline std::string damped_hamiltonian_text(std::string_view potential) {
  return "p1^2/(2*m) + (" + std::string(potential) + ") + alpha*s";
}

/// Contact Hamiltonian H = p^2/(2m) + V(q) + alpha S.
inline HamiltonianFunction damped_hamiltonian(double m, double alpha, std::string_view potential = "0.5*q1^2") {
  if (!(m > 0.0)) throw InvalidArgument("damped oscillator mass must be positive");
  return HamiltonianFunction(damped_hamiltonian_text(potential), 1, {{"m", m}, {"alpha", alpha}});
}

/// Expression overrides accepted by builtin_system: "omega" (ws) and "V" (damped).
using ExpressionOverrides = std::map<std::string, std::string>;

/// Named built-in systems (ws, trig, damped) as system definitions. Parameter
/// overrides replace the defaults; unknown extra parameters are carried along
/// so sections can reference them.
inline std::optional<SystemDefinition> builtin_system(std::string_view name, const ParameterMap& overrides = {},
                                                      const ExpressionOverrides& exprs = {}) {
  auto expr_or = [&](const std::string& key, std::string fallback) {
    auto it = exprs.find(key);
    return it == exprs.end() ? fallback : it->second;
  };
  SystemDefinition d;
  d.n = 1;
  if (name == "ws") {
    d.structure = StructureKind::cosymplectic;
    d.params = {{"k", 1.0}};
  } else if (name == "trig") {
    d.structure = StructureKind::cosymplectic;
    d.hamiltonian = std::string(kTrigHamiltonianText);
    d.params = {{"alpha", 1.0}, {"w", 1.0}};
  } else if (name == "damped") {
    d.structure = StructureKind::contact;
    d.hamiltonian = damped_hamiltonian_text(expr_or("V", "0.5*q1^2"));
    d.params = {{"m", 1.0}, {"alpha", 0.1}};
  } else {
    return std::nullopt;
  }
  for (const auto& [k, v] : overrides) d.params[k] = v;
  if (name == "ws") {
    d.hamiltonian = ws_hamiltonian_text(expr_or("omega", "1"), d.params["k"]);
    d.q_singular = d.params["k"] != 0.0;
  }
  if (name == "damped" && !(d.params["m"] > 0.0)) throw InvalidArgument("damped oscillator mass must be positive");
  return d;
}

// ---------------------------------------------------------------------------
// Milne-Pinney closed forms  q'' = k/q^3 - omega(t)^2 q

/// q = (sqrt2/|W|) sqrt(C1 y1^2 + C2 y2^2 +- sqrt(4 C1 C2 - k W^2 y1 y2)).
struct NestedRootPinneyForm {
  double c1 = 1.0;
  double c2 = 1.0;
  int branch = +1;  ///< sign in front of the inner root
};

/// q = sqrt(A y1^2 + 2 B y1 y2 + C y2^2) with AC - B^2 = k / W^2.
struct ClassicalPinneyForm {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
};

struct PinneySpec {
  double k = 1.0;
  std::string omega = "1";   ///< expression in t
  std::string y1 = "cos(t)";  ///< solutions of y'' = -omega^2 y
  std::string y2 = "sin(t)";
  std::variant<NestedRootPinneyForm, ClassicalPinneyForm> form = ClassicalPinneyForm{};
};

/// Scales (A, B, C) by one positive factor so that AC - B^2 = k / W^2.
inline ClassicalPinneyForm rescale_to_constraint(ClassicalPinneyForm f, double k, double wronskian) {
  const double det = f.a * f.c - f.b * f.b;
  if (!(det > 0.0) || !(f.a > 0.0)) throw InvalidArgument("classical Pinney form must be positive definite");
  if (!(k > 0.0)) throw InvalidArgument("rescaling needs k > 0");
  if (wronskian == 0.0) throw InvalidArgument("Wronskian must be nonzero");
  const double lambda = std::sqrt(k / (wronskian * wronskian) / det);
  return {lambda * f.a, lambda * f.b, lambda * f.c};
}

class PinneySolution {
 public:
  explicit PinneySolution(PinneySpec spec)
      : spec_(std::move(spec)),
        omega_(spec_.omega, expr::SymbolTable::time()),
        y1_(spec_.y1, expr::SymbolTable::time()),
        y2_(spec_.y2, expr::SymbolTable::time()) {
    const double w = wronskian_ = wronskian(0.0);
    if (std::abs(w) < 1e-12) throw InvalidArgument("Wronskian of y1, y2 vanishes");
    if (auto* c = std::get_if<ClassicalPinneyForm>(&spec_.form)) {
      const double det = c->a * c->c - c->b * c->b;
      const double want = spec_.k / (w * w);
      if (std::abs(det - want) > 1e-9 * std::max(1.0, std::abs(want)))
        throw InvalidArgument("classical Pinney coefficients violate AC - B^2 = k/W^2 (AC - B^2 = " + format_real(det) +
                              ", k/W^2 = " + format_real(want) + ")");
    }
  }

  const PinneySpec& spec() const noexcept { return spec_; }

  double wronskian(double t) const {
    const Dual a = eval(y1_, Dual::variable(t));
    const Dual b = eval(y2_, Dual::variable(t));
    return a.value * b.derivative - b.value * a.derivative;
  }

  double omega(double t) const { return eval(omega_, t); }

  /// q(t).
  double operator()(double t) const { return position(t).value; }

  /// dq/dt, exact by dual arithmetic.
  double velocity(double t) const { return position(Dual::variable(t)).derivative; }

  Dual position(Dual t) const {
    const Dual a = eval(y1_, t);
    const Dual b = eval(y2_, t);
    return std::visit([&](const auto& f) { return formula(f, a, b); }, spec_.form);
  }

  /// |q'' - k/q^3 + omega^2 q| with q'' from 5-point central differences.
  double residual(double t, double h = 1e-3) const {
    const double q = (*this)(t);
    const double qpp = (-(*this)(t + 2 * h) + 16.0 * (*this)(t + h) - 30.0 * q + 16.0 * (*this)(t - h) -
                        (*this)(t - 2 * h)) /
                       (12.0 * h * h);
    const double w = omega(t);
    return std::abs(qpp - spec_.k / (q * q * q) + w * w * q);
  }

 private:
  template <class T>
  static T eval(const expr::Expression& e, T t) {
    const T vars[1] = {t};
    return e.evaluate<T>(std::span<const T>(vars, 1));
  }

  Dual formula(const ClassicalPinneyForm& f, const Dual& y1, const Dual& y2) const {
    const Dual rad = f.a * y1 * y1 + 2.0 * f.b * y1 * y2 + f.c * y2 * y2;
    if (rad.value < 0.0) throw DomainError("negative radicand in A*y1^2 + 2*B*y1*y2 + C*y2^2");
    if (rad.value == 0.0) throw DomainError("zero radicand in A*y1^2 + 2*B*y1*y2 + C*y2^2");
    return sqrt(rad);
  }

  Dual formula(const NestedRootPinneyForm& f, const Dual& y1, const Dual& y2) const {
    const double w = wronskian_;
    const Dual inner = 4.0 * f.c1 * f.c2 - spec_.k * w * w * y1 * y2;
    if (inner.value < 0.0) throw DomainError("negative radicand in 4*C1*C2 - k*W^2*y1*y2");
    const Dual outer = f.c1 * y1 * y1 + f.c2 * y2 * y2 + double(f.branch >= 0 ? 1 : -1) * sqrt(inner);
    if (outer.value <= 0.0) throw DomainError("non-positive radicand in C1*y1^2 + C2*y2^2 +- sqrt(4*C1*C2 - k*W^2*y1*y2)");
    return (std::sqrt(2.0) / std::abs(w)) * sqrt(outer);
  }

  PinneySpec spec_;
  expr::Expression omega_, y1_, y2_;
  double wronskian_ = 0.0;  // constant for undamped linear oscillators; sampled at t = 0
};

inline double pinney_solution(const PinneySpec& spec, double t) { return PinneySolution(spec)(t); }

// ---------------------------------------------------------------------------
// Trigonometric system: closed-form gamma and its characteristic system

/// Sign of the gamma equation along characteristics. `consistent` is
/// d gamma/dt = -dH/dq, matching the general cosymplectic HJ equation;
/// `reversed` is d gamma/dt = +q(1 + alpha sin(wt) p^2), the sign the
/// closed-form gamma below satisfies at alpha = 0.
enum class TrigSign { consistent, reversed };

/// Right-hand side over (q, gamma, t) of
///   dq/dt = gamma (1 + alpha sin(wt) q^2),  d gamma/dt = -+ q (1 + alpha sin(wt) gamma^2),  dt/dt = 1.
inline OdeRhs trig_characteristic_system(double alpha, double w, TrigSign sign = TrigSign::consistent) {
  const double sigma = sign == TrigSign::consistent ? -1.0 : 1.0;
  return [=](double, std::span<const double> y, std::span<double> dy) {
    const double q = y[0], g = y[1], t = y[2];
    const double a = alpha * std::sin(w * t);
    dy[0] = g * (1.0 + a * q * q);
    dy[1] = sigma * q * (1.0 + a * g * g);
    dy[2] = 1.0;
  };
}

/// gamma(t) = +-(e^{2t} + 2 C2) / sqrt(-a e^{4t} + 4 a e^{2t} C2 - 4 a C2^2 + 4 e^{2t} C1),
/// a = alpha sin(wt).
inline double trig_closed_form_gamma(double alpha, double w, double c1, double c2, double t, int sign = +1) {
  const double a = alpha * std::sin(w * t);
  const double e2 = std::exp(2.0 * t);
  const double rad = -a * e2 * e2 + 4.0 * a * e2 * c2 - 4.0 * a * c2 * c2 + 4.0 * e2 * c1;
  if (!(rad > 0.0)) throw DomainError("non-positive radicand in the closed-form trigonometric gamma");
  return (sign >= 0 ? 1.0 : -1.0) * (e2 + 2.0 * c2) / std::sqrt(rad);
}

/// Residual of the closed-form gamma against the characteristic system: q is
/// recovered from the gamma equation, then the q equation is checked.
/// Derivatives are 5-point central differences with step h.
inline double trig_closed_form_residual(double alpha, double w, double c1, double c2, double t, int sign,
                                        TrigSign convention, double h = 1e-3) {
  const double sigma = convention == TrigSign::consistent ? -1.0 : 1.0;
  auto gamma = [&](double tt) { return trig_closed_form_gamma(alpha, w, c1, c2, tt, sign); };
  auto d5 = [&](auto&& f, double tt) {
    return (f(tt - 2 * h) - 8.0 * f(tt - h) + 8.0 * f(tt + h) - f(tt + 2 * h)) / (12.0 * h);
  };
  auto q_of = [&](double tt) {
    const double g = gamma(tt);
    return d5(gamma, tt) / (sigma * (1.0 + alpha * std::sin(w * tt) * g * g));
  };
  const double g = gamma(t);
  const double q = q_of(t);
  return std::abs(d5(q_of, t) - g * (1.0 + alpha * std::sin(w * t) * q * q));
}

// ---------------------------------------------------------------------------
// Damped oscillator: implicit q(gamma) with frozen coefficients

inline double damped_c1(double m, double alpha) { return alpha * m; }

/// c2 = -m (V(q) - V'(q) + m alpha S) at a frozen (q, S).
inline double damped_c2(double m, double alpha, double v, double v_prime, double s) {
  return -m * (v - v_prime + m * alpha * s);
}

enum class DampedBranch { logarithmic, arctangent };

struct DampedImplicitValue {
  double q = 0.0;
  DampedBranch branch = DampedBranch::logarithmic;
};

/// Implicit solution q(gamma) of the reduced damped HJ equation:
///   c1^2 > 2 c2:  q = c1/r ln((gamma + c1 - r)/(gamma + c1 + r)) - ln(gamma^2/2 + c1 gamma + c2),  r = sqrt(c1^2 - 2 c2)
///   c1^2 < 2 c2:  q = 2/r atan((gamma + c1)/r) - ln(gamma^2/2 + c1 gamma + c2),                r = sqrt(2 c2 - c1^2)
inline DampedImplicitValue damped_implicit_solution(double c1, double c2, double gamma) {
  const double disc = c1 * c1 - 2.0 * c2;
  if (disc == 0.0) throw DomainError("degenerate discriminant c1^2 - 2 c2 = 0");
  const double quad = 0.5 * gamma * gamma + c1 * gamma + c2;
  if (!(quad > 0.0)) throw DomainError("ln of non-positive gamma^2/2 + c1 gamma + c2");
  if (disc > 0.0) {
    const double r = std::sqrt(disc);
    const double ratio = (gamma + c1 - r) / (gamma + c1 + r);
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("ln of non-positive (gamma + c1 - r)/(gamma + c1 + r)");
    return {c1 / r * std::log(ratio) - std::log(quad), DampedBranch::logarithmic};
  }
  const double r = std::sqrt(-disc);
  return {2.0 / r * std::atan((gamma + c1) / r) - std::log(quad), DampedBranch::arctangent};
}

struct DampedVerification {
  double formula_slope = 0.0;  ///< dq/dgamma of the closed form, central differences
  double ode_slope = 0.0;      ///< -gamma / (gamma^2/2 + c1 gamma + c2)
  double residual = 0.0;
  DampedBranch branch = DampedBranch::logarithmic;
};

/// Checks the closed form against the reduced ODE
///   d gamma/dq + gamma/2 + c1 + c2/gamma = 0
/// (frozen c2), i.e. dq/dgamma = -gamma / (gamma^2/2 + c1 gamma + c2).
inline DampedVerification damped_implicit_verification(double c1, double c2, double gamma, double h = 1e-5) {
  DampedVerification v;
  const auto mid = damped_implicit_solution(c1, c2, gamma);
  v.branch = mid.branch;
  const double up = damped_implicit_solution(c1, c2, gamma + h).q;
  const double dn = damped_implicit_solution(c1, c2, gamma - h).q;
  v.formula_slope = (up - dn) / (2.0 * h);
  v.ode_slope = -gamma / (0.5 * gamma * gamma + c1 * gamma + c2);
  v.residual = std::abs(v.formula_slope - v.ode_slope);
  return v;
}

/// Left side of the damped-oscillator HJ equation as displayed in component
/// form, p = gamma:
///   (gamma^2/2m - V - alpha S) gamma_S + (gamma/m) gamma_q + (gamma alpha + V').
inline double damped_hj_display(double m, double alpha, double v, double v_prime, double s, double gamma,
                                double gamma_q, double gamma_s) {
  return (gamma * gamma / (2.0 * m) - v - alpha * s) * gamma_s + gamma / m * gamma_q + (gamma * alpha + v_prime);
}

/// The same equation after fixing gamma_S = 1 and multiplying by m/gamma:
///   gamma_q + gamma/2 + alpha m + (m/gamma)(V' - V - alpha S).
inline double damped_hj_reduced_display(double m, double alpha, double v, double v_prime, double s, double gamma,
                                        double gamma_q) {
  return gamma_q + 0.5 * gamma + alpha * m + m / gamma * (v_prime - v - alpha * s);
}

}  // namespace hamjac::models
