#include "spherewave/detail/dopri5.hpp"

#include <algorithm>
#include <cmath>

#include "spherewave/errors.hpp"

namespace spherewave::detail {

namespace {

// Butcher tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Error weights (5th minus 4th order).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

constexpr double kUround = 2.3e-16;

struct Trial {
  State y1;
  State k7;
  State err;
  DenseStep dense;
};

Trial rk_step(const Rhs& f, double t, const State& y, const State& k1, double h) {
  const auto n = y.size();
  State k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n);
  tmp = y + h * a21 * k1;
  f(t + c2 * h, tmp, k2);
  tmp = y + h * (a31 * k1 + a32 * k2);
  f(t + c3 * h, tmp, k3);
  tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
  f(t + c4 * h, tmp, k4);
  tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
  f(t + c5 * h, tmp, k5);
  tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
  f(t + h, tmp, k6);

  Trial out;
  out.y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
  out.k7.resize(n);
  f(t + h, out.y1, out.k7);
  out.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * out.k7);

  DenseStep& d = out.dense;
  d.t0 = t;
  d.h = h;
  const State ydiff = out.y1 - y;
  const State bspl = h * k1 - ydiff;
  d.r1 = y;
  d.r2 = ydiff;
  d.r3 = bspl;
  d.r4 = ydiff - h * out.k7 - bspl;
  d.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * out.k7);
  return out;
}

double error_norm(const State& err, const State& y0, const State& y1,
                  const StepControl& ctl) {
  const State sk = ctl.atol + ctl.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array();
  return std::sqrt((err.array() / sk.array()).square().mean());
}

double initial_step(const Rhs& f, double t0, const State& y0, const State& f0,
                    double hmax, const StepControl& ctl) {
  const State sk = (ctl.atol + ctl.rtol * y0.cwiseAbs().array()).matrix();
  const double dnf = (f0.array() / sk.array()).square().sum();
  const double dny = (y0.array() / sk.array()).square().sum();
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, hmax);
  State y1 = y0 + h * f0;
  State f1(y0.size());
  f(t0 + h, y1, f1);
  const double der2 = std::sqrt(((f1 - f0).array() / sk.array()).square().sum()) / h;
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                   : std::pow(0.01 / der12, 1.0 / 5.0);
  return std::min({100.0 * h, h1, hmax});
}

}  // namespace

State DenseStep::eval(double t) const {
  const double th = (t - t0) / h;
  const double th1 = 1.0 - th;
  return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
}

State DenseOutput::eval(double t) const {
  if (steps_.empty() || t <= t0_) return steps_.empty() ? y0_ : steps_.front().r1;
  if (t >= t_end()) {
    const DenseStep& last = steps_.back();
    return last.r1 + last.r2;
  }
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double v, const DenseStep& s) { return v < s.t1(); });
  return it->eval(t);
}

SolveResult dopri5(const Rhs& f, double t0, const State& y0, double t_max,
                   const StepControl& ctl, const EventFn& event) {
  if (!(t_max > t0)) throw IntegrationError("dopri5: empty time interval");
  const double hmax = std::min(ctl.max_step, t_max - t0);

  SolveResult res;
  res.dense = DenseOutput(t0, y0);

  double t = t0;
  State y = y0;
  State k1(y0.size());
  f(t, y, k1);
  double h = initial_step(f, t0, y0, k1, hmax, ctl);
  bool last_rejected = false;

  while (t < t_max) {
    if (res.accepted + res.rejected >= ctl.max_steps) {
      throw IntegrationError("dopri5: maximum number of steps exceeded");
    }
    if (0.1 * h <= std::abs(t) * kUround) {
      throw IntegrationError("dopri5: step size underflow");
    }
    bool final_step = false;
    if (t + 1.01 * h >= t_max) {
      h = t_max - t;
      final_step = true;
    }

    Trial trial = rk_step(f, t, y, k1, h);
    const double err = error_norm(trial.err, y, trial.y1, ctl);
    // A non-finite estimate (e.g. a stage outside the domain of f) is
    // treated as a maximal rejection.
    const double fac = std::isfinite(err) ? std::pow(err, 0.2) / 0.9 : 5.0;
    if (!(err <= 1.0)) {
      ++res.rejected;
      h /= std::min(1.0 / 0.2, fac);
      last_rejected = true;
      continue;
    }

    ++res.accepted;
    const double t_next = final_step ? t_max : t + h;

    if (event && event(trial.y1) >= 0.0) {
      double lo = t;
      double hi = t_next;
      while (hi - lo > ctl.event_tol) {
        const double mid = 0.5 * (lo + hi);
        if (event(trial.dense.eval(mid)) >= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const double t_event = hi;
      Trial exact = rk_step(f, t, y, k1, t_event - t);
      res.dense.push(std::move(exact.dense));
      res.t_exit = t_event;
      res.y_exit = std::move(exact.y1);
      res.event_hit = true;
      return res;
    }

    res.dense.push(std::move(trial.dense));
    t = t_next;
    y = std::move(trial.y1);
    k1 = std::move(trial.k7);

    double h_new = h / std::max(1.0 / 10.0, fac);
    if (last_rejected) h_new = std::min(h_new, h);
    h = std::min(h_new, hmax);
    last_rejected = false;
  }

  res.t_exit = t_max;
  res.y_exit = y;
  return res;
}

}  // namespace spherewave::detail
