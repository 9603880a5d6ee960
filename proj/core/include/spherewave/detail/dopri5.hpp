#pragma once

// Dormand–Prince 5(4) with the fourth-order continuous extension of
// Hairer, Nørsett & Wanner (DOPRI5), plus terminal event location on the
// dense output.

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace spherewave::detail {

using State = Eigen::VectorXd;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;
/// Terminal event: integration stops where the value first becomes ≥ 0.
using EventFn = std::function<double(const State& y)>;

struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  State r1, r2, r3, r4, r5;

  State eval(double t) const;
  double t1() const { return t0 + h; }
};

/// Piecewise quartic interpolant over the accepted steps of one solve.
class DenseOutput {
 public:
  DenseOutput() = default;
  DenseOutput(double t0, State y0) : t0_(t0), y0_(std::move(y0)) {}

  void push(DenseStep step) { steps_.push_back(std::move(step)); }
  void replace_last(DenseStep step) { steps_.back() = std::move(step); }

  double t_begin() const { return t0_; }
  double t_end() const { return steps_.empty() ? t0_ : steps_.back().t1(); }
  const std::vector<DenseStep>& steps() const { return steps_; }

  /// Evaluates at t, clamped to [t_begin, t_end].
  State eval(double t) const;

 private:
  double t0_ = 0.0;
  State y0_;
  std::vector<DenseStep> steps_;
};

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
  double event_tol = 1e-12;
};

struct SolveResult {
  DenseOutput dense;
  double t_exit = 0.0;
  State y_exit;
  bool event_hit = false;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Integrates y' = f(t, y) from t0 to t_max (t_max > t0), stopping early at
/// the first event crossing. Throws IntegrationError on step-size underflow
/// or when max_steps is exceeded.
SolveResult dopri5(const Rhs& f, double t0, const State& y0, double t_max,
                   const StepControl& ctl, const EventFn& event = {});

}  // namespace spherewave::detail
