#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/numerics/dual.hpp"
#include "hamjac/numerics/gradient.hpp"
#include "hamjac/phase/expression.hpp"
#include "hamjac/phase/point.hpp"

namespace hamjac {

/// Scalar field H(q, p, s) on T*Q x R, defined by an expression over
/// q1..qn, p1..pn, s and bound parameters.
class HamiltonianFunction {
 public:
  HamiltonianFunction(std::string_view text, std::size_t n, const ParameterMap& params = {})
      : n_(n), body_(check_arity(text, n), expr::SymbolTable::extended(n), params) {}

  std::size_t arity() const noexcept { return n_; }
  std::size_t flat_size() const noexcept { return 2 * n_ + 1; }

  template <class T>
  T operator()(std::span<const T> x) const {
    return body_.evaluate<T>(x);
  }
  double operator()(const ExtendedPoint& x) const {
    check_point(x);
    const auto flat = x.flat();
    return (*this)(std::span<const double>(flat));
  }

  /// (dH/dq, dH/dp, dH/ds) at x.
  std::vector<double> gradient(const ExtendedPoint& x) const {
    check_point(x);
    const auto flat = x.flat();
    return grad(*this, std::span<const double>(flat));
  }

  /// Marks systems whose potential blows up at q = 0 (k/q^2 terms); the
  /// integrator's singularity guard only acts on these.
  HamiltonianFunction& declare_q_singular(bool on = true) {
    q_singular_ = on;
    return *this;
  }
  bool q_singular() const noexcept { return q_singular_; }

  const expr::Expression& expression() const noexcept { return body_; }
  std::string to_string() const { return body_.to_string(); }
  ParameterMap parameters() const { return body_.bound_parameters(); }

 private:
  static std::string_view check_arity(std::string_view text, std::size_t n) {
    if (n == 0) throw InvalidArgument("Hamiltonian arity must be >= 1");
    return text;
  }
  void check_point(const ExtendedPoint& x) const {
    if (x.dimension() != n_) throw InvalidArgument("point dimension does not match Hamiltonian arity");
  }

  std::size_t n_;
  expr::Expression body_;
  bool q_singular_ = false;
};

inline HamiltonianFunction parse_hamiltonian(std::string_view text, std::size_t n, const ParameterMap& params = {}) {
  return HamiltonianFunction(text, n, params);
}

/// Values and first partials of a section at one base point.
struct SectionJet {
  std::vector<double> value;                 ///< gamma^j
  std::vector<std::vector<double>> dq;       ///< dq[j][i] = d gamma^j / d q^i
  std::vector<double> ds;                    ///< d gamma^j / d s
};

/// Section gamma of T*Q x R -> Q x R, (q, s) -> p = gamma(q, s).
class Section {
 public:
  Section(const std::vector<std::string>& components, std::size_t n, const ParameterMap& params = {}) : n_(n) {
    if (n == 0) throw InvalidArgument("section dimension must be >= 1");
    if (components.size() != n) throw InvalidArgument("section needs exactly n components");
    components_.reserve(n);
    for (const auto& c : components) components_.emplace_back(c, expr::SymbolTable::base(n), params);
  }

  std::size_t dimension() const noexcept { return n_; }

  /// gamma(q, s).
  std::vector<double> operator()(std::span<const double> q, double s) const {
    const auto vars = base_vector<double>(q, s);
    std::vector<double> out;
    out.reserve(n_);
    for (const auto& c : components_) out.push_back(c.evaluate<double>(vars));
    return out;
  }

  SectionJet jet(std::span<const double> q, double s) const {
    auto vars = base_vector<Dual>(q, s);
    SectionJet j;
    j.value.resize(n_);
    j.dq.assign(n_, std::vector<double>(n_));
    j.ds.resize(n_);
    for (std::size_t dir = 0; dir <= n_; ++dir) {
      vars[dir].derivative = 1.0;
      for (std::size_t c = 0; c < n_; ++c) {
        const Dual r = components_[c].evaluate<Dual>(vars);
        if (!std::isfinite(r.derivative)) throw DomainError("non-finite section partial", dir);
        j.value[c] = r.value;
        if (dir < n_)
          j.dq[c][dir] = r.derivative;
        else
          j.ds[c] = r.derivative;
      }
      vars[dir].derivative = 0.0;
    }
    return j;
  }

  /// The extended point gamma(q, s) = (q, gamma(q, s), s).
  ExtendedPoint lift(std::span<const double> q, double s) const {
    return ExtendedPoint({q.begin(), q.end()}, (*this)(q, s), s);
  }

  const std::vector<expr::Expression>& components() const noexcept { return components_; }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (const auto& c : components_) out.push_back(c.to_string());
    return out;
  }

 private:
  template <class T>
  std::vector<T> base_vector(std::span<const double> q, double s) const {
    if (q.size() != n_) throw InvalidArgument("base point dimension does not match section");
    std::vector<T> v(q.begin(), q.end());
    v.push_back(T(s));
    return v;
  }

  std::size_t n_;
  std::vector<expr::Expression> components_;
};

/// Pointwise defect of d(gamma_s) = 0: max over i < j of
/// |d gamma^j / d q^i - d gamma^i / d q^j|. Always 0 for n = 1.
inline double closedness_defect(const SectionJet& jet) {
  double worst = 0.0;
  const std::size_t n = jet.value.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(jet.dq[j][i] - jet.dq[i][j]));
  return worst;
}

inline double closedness_defect(const Section& gamma, std::span<const double> q, double s) {
  return closedness_defect(gamma.jet(q, s));
}

}  // namespace hamjac
