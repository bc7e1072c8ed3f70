#pragma once

/// Explicit Runge-Kutta integrators over flat state vectors: classical RK4
/// with a fixed step, and the Dormand-Prince 5(4) embedded pair with
/// standard step-size control. Both report the state on a uniform output
/// grid, landing exactly on every grid time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hamjac/errors.hpp"

namespace hamjac {

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::rk45_adaptive;
  double step = 1e-3;  ///< rk4 step (upper bound, shrunk to divide each output interval)
  double rtol = 1e-9;
  double atol = 1e-12;
  std::size_t max_steps = 10'000'000;
  double singularity_guard = 1e-6;  ///< minimum |q^i| for q-singular systems
  std::size_t output_intervals = 1000;

  void validate() const {
    if (!(step > 0.0)) throw InvalidArgument("integrator step must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidArgument("integrator tolerances must be positive");
    if (max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
    if (output_intervals < 1) throw InvalidArgument("output_intervals must be >= 1");
    if (!(singularity_guard >= 0.0)) throw InvalidArgument("singularity_guard must be nonnegative");
  }
};

class IntegrationError : public Error {
 public:
  enum class Reason { singularity, max_steps, step_underflow };

  IntegrationError(Reason reason, const std::string& what, double last_tau, std::vector<double> last_state)
      : Error(what), reason_(reason), last_tau_(last_tau), last_state_(std::move(last_state)) {}

  Reason reason() const noexcept { return reason_; }
  double last_tau() const noexcept { return last_tau_; }
  /// Last accepted state before the failure.
  const std::vector<double>& last_state() const noexcept { return last_state_; }

 private:
  Reason reason_;
  double last_tau_;
  std::vector<double> last_state_;
};

using OdeRhs = std::function<void(double tau, std::span<const double> y, std::span<double> dy)>;
/// Returns false when a state is inadmissible (singularity guard).
using StateGuard = std::function<bool(std::span<const double> y)>;

struct OdeSolution {
  std::vector<double> tau;
  std::vector<std::vector<double>> state;
};

namespace detail {

struct Dopri5 {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  static constexpr std::array<double, 7> b{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr std::array<double, 7> b_low{5179.0 / 57600, 0.0,  7571.0 / 16695, 393.0 / 640,
                                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, const StateGuard& guard, const IntegratorConfig& cfg, std::size_t dim)
      : rhs_(rhs), guard_(guard), cfg_(cfg), k_(7, std::vector<double>(dim)), tmp_(dim), next_(dim) {}

  void eval(double t, std::span<const double> y, std::span<double> dy, double last_t,
            const std::vector<double>& last_y) {
    try {
      rhs_(t, y, dy);
    } catch (const DomainError& e) {
      throw IntegrationError(IntegrationError::Reason::singularity, std::string("singular field evaluation: ") + e.what(),
                             last_t, last_y);
    }
    for (double v : dy)
      if (!std::isfinite(v))
        throw IntegrationError(IntegrationError::Reason::singularity, "non-finite field value", last_t, last_y);
  }

  void check_guard(const std::vector<double>& y, double last_t, const std::vector<double>& last_y) {
    if (guard_ && !guard_(y))
      throw IntegrationError(IntegrationError::Reason::singularity, "singularity guard tripped", last_t, last_y);
  }

  void count_step(double t, const std::vector<double>& y) {
    if (++steps_ > cfg_.max_steps)
      throw IntegrationError(IntegrationError::Reason::max_steps, "step limit exceeded", t, y);
  }

  void rk4(double t, std::vector<double>& y, double h) {
    const std::size_t d = y.size();
    count_step(t, y);
    eval(t, y, k_[0], t, y);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + 0.5 * h * k_[0][i];
    eval(t + 0.5 * h, tmp_, k_[1], t, y);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + 0.5 * h * k_[1][i];
    eval(t + 0.5 * h, tmp_, k_[2], t, y);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + h * k_[2][i];
    eval(t + h, tmp_, k_[3], t, y);
    for (std::size_t i = 0; i < d; ++i) next_[i] = y[i] + h / 6.0 * (k_[0][i] + 2.0 * k_[1][i] + 2.0 * k_[2][i] + k_[3][i]);
    check_guard(next_, t, y);
    y.swap(next_);
  }

  /// Advances (t, y) to exactly t_end with adaptive steps; `h` carries the
  /// proposed step across calls.
  void dopri_to(double& t, std::vector<double>& y, double t_end, double& h) {
    const std::size_t d = y.size();
    using D = Dopri5;
    while (t < t_end) {
      const double remaining = t_end - t;
      const bool last = h >= remaining * (1.0 - 1e-12);
      const double step = last ? remaining : h;
      if (step <= std::abs(t) * 1e-15 || step < 1e-300)
        throw IntegrationError(IntegrationError::Reason::step_underflow, "step size underflow", t, y);
      count_step(t, y);

      eval(t, y, k_[0], t, y);
      for (std::size_t s = 1; s < 7; ++s) {
        for (std::size_t i = 0; i < d; ++i) {
          double acc = y[i];
          for (std::size_t m = 0; m < s; ++m) acc += step * D::a[s][m] * k_[m][i];
          tmp_[i] = acc;
        }
        eval(t + D::c[s] * step, tmp_, k_[s], t, y);
      }
      // Stage 7 is evaluated at the 5th-order solution (FSAL).
      next_ = tmp_;
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        double e = 0.0;
        for (std::size_t m = 0; m < 7; ++m) e += (D::b[m] - D::b_low[m]) * k_[m][i];
        e *= step;
        const double scale = cfg_.atol + cfg_.rtol * std::max(std::abs(y[i]), std::abs(next_[i]));
        norm += (e / scale) * (e / scale);
      }
      norm = std::sqrt(norm / static_cast<double>(d));

      const double factor =
          norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      if (norm <= 1.0) {
        check_guard(next_, t, y);
        t = last ? t_end : t + step;
        y.swap(next_);
        // A clipped final step says nothing about the natural step.
        if (!last || factor < 1.0) h = step * factor;
      } else {
        h = step * std::max(factor, 0.2);
      }
    }
  }

  double initial_step(double t, const std::vector<double>& y, double span) {
    const std::size_t d = y.size();
    eval(t, y, k_[0], t, y);
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double sc = cfg_.atol + cfg_.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
    }
    d0 = std::sqrt(d0 / d);
    d1 = std::sqrt(d1 / d);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + h0 * k_[0][i];
    eval(t + h0, tmp_, k_[1], t, y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double sc = cfg_.atol + cfg_.rtol * std::abs(y[i]);
      const double v = (k_[1][i] - k_[0][i]) / sc;
      d2 += v * v;
    }
    d2 = std::sqrt(d2 / d) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span});
  }

 private:
  const OdeRhs& rhs_;
  const StateGuard& guard_;
  const IntegratorConfig& cfg_;
  std::vector<std::vector<double>> k_;
  std::vector<double> tmp_, next_;
  std::size_t steps_ = 0;
};

}  // namespace detail

namespace detail {

inline OdeSolution solve_forward(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                                 const IntegratorConfig& cfg, const StateGuard& guard) {
  for (double v : y0)
    if (!std::isfinite(v)) throw InvalidArgument("initial state must be finite");
  if (guard && !guard(y0))
    throw IntegrationError(IntegrationError::Reason::singularity, "initial state violates the singularity guard", t0, y0);

  detail::Stepper stepper(rhs, guard, cfg, y0.size());
  OdeSolution sol;
  const std::size_t intervals = cfg.output_intervals;
  const double dt = (t1 - t0) / static_cast<double>(intervals);
  sol.tau.reserve(intervals + 1);
  sol.state.reserve(intervals + 1);
  sol.tau.push_back(t0);
  sol.state.push_back(y0);

  double t = t0;
  std::vector<double> y = std::move(y0);
  double h = cfg.method == IntegratorMethod::rk45_adaptive ? stepper.initial_step(t, y, t1 - t0) : cfg.step;
  for (std::size_t k = 1; k <= intervals; ++k) {
    const double target = k == intervals ? t1 : t0 + static_cast<double>(k) * dt;
    if (cfg.method == IntegratorMethod::rk4_fixed) {
      const double interval = target - t;
      const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(interval / cfg.step - 1e-9)));
      const double hh = interval / static_cast<double>(substeps);
      for (std::size_t m = 0; m < substeps; ++m) {
        stepper.rk4(t, y, hh);
        t = m + 1 == substeps ? target : t + hh;
      }
    } else {
      stepper.dopri_to(t, y, target, h);
    }
    sol.tau.push_back(target);
    sol.state.push_back(y);
  }
  return sol;
}

}  // namespace detail

/// Integrates y' = rhs(tau, y) from t0 to t1 (either direction), sampling at
/// t0 + k (t1 - t0) / cfg.output_intervals.
inline OdeSolution solve_ode(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                             const IntegratorConfig& cfg, const StateGuard& guard = {}) {
  cfg.validate();
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1)
    throw InvalidArgument("integration span must be finite and non-empty");
  if (t1 > t0) return detail::solve_forward(rhs, std::move(y0), t0, t1, cfg, guard);

  // Backward in tau: integrate z(u) = y(-u) forward over [-t0, -t1].
  const OdeRhs reversed = [&rhs](double u, std::span<const double> y, std::span<double> dy) {
    rhs(-u, y, dy);
    for (double& v : dy) v = -v;
  };
  try {
    auto sol = detail::solve_forward(reversed, std::move(y0), -t0, -t1, cfg, guard);
    for (double& tau : sol.tau) tau = -tau;
    sol.tau.front() = t0;
    sol.tau.back() = t1;
    return sol;
  } catch (const IntegrationError& e) {
    throw IntegrationError(e.reason(), e.what(), -e.last_tau(), e.last_state());
  }
}

}  // namespace hamjac
