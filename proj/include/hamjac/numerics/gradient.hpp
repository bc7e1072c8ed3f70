#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/numerics/dual.hpp"

namespace hamjac {

/// Anything evaluatable on a flat coordinate vector in both plain and dual
/// arithmetic.
template <class F>
concept ScalarField = requires(const F& f, std::span<const double> x, std::span<const Dual> xd) {
  { f(x) } -> std::convertible_to<double>;
  { f(xd) } -> std::convertible_to<Dual>;
};

struct DerivativeReport {
  std::vector<double> gradient;
  std::vector<double> fd_gradient;
  double max_discrepancy = 0.0;
};

/// Exact gradient by one dual pass per coordinate.
template <ScalarField F>
std::vector<double> grad(const F& f, std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) throw DomainError("non-finite coordinate", i);

  std::vector<Dual> seeded(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    seeded[i].derivative = 1.0;
    const Dual r = f(std::span<const Dual>(seeded));
    seeded[i].derivative = 0.0;
    if (!std::isfinite(r.value)) throw DomainError("non-finite value", i);
    if (!std::isfinite(r.derivative)) throw DomainError("non-finite partial derivative", i);
    g[i] = r.derivative;
  }
  return g;
}

/// Central finite differences with step cbrt(eps) * max(1, |x_i|).
template <ScalarField F>
std::vector<double> fd_grad(const F& f, std::span<const double> x) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = base * std::max(1.0, std::abs(x[i]));
    const double hi = x[i] + h, lo = x[i] - h;
    probe[i] = hi;
    const double fh = f(std::span<const double>(probe));
    probe[i] = lo;
    const double fl = f(std::span<const double>(probe));
    probe[i] = x[i];
    g[i] = (fh - fl) / (hi - lo);
    if (!std::isfinite(g[i])) throw DomainError("non-finite finite difference", i);
  }
  return g;
}

template <ScalarField F>
DerivativeReport grad_crosscheck(const F& f, std::span<const double> x) {
  DerivativeReport r{grad(f, x), fd_grad(f, x), 0.0};
  for (std::size_t i = 0; i < x.size(); ++i)
    r.max_discrepancy =
        std::max(r.max_discrepancy, std::abs(r.gradient[i] - r.fd_gradient[i]) / std::max(1.0, std::abs(r.gradient[i])));
  return r;
}

}  // namespace hamjac
