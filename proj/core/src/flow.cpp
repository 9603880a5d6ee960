#include "spherewave/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spherewave/bch.hpp"
#include "spherewave/errors.hpp"

namespace spherewave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTimeSlack = 1e-12;
constexpr double kGimbalLimit = 1e-6;

detail::StepControl step_control(const IntegratorConfig& cfg) {
  detail::StepControl ctl;
  ctl.rtol = cfg.rtol;
  ctl.atol = cfg.atol;
  ctl.max_step = cfg.max_step;
  return ctl;
}

// Trial stages of an oversized step can leave the chart well past the
// restart sphere; a NaN slope there makes the integrator shrink the step.
constexpr double kStageLimit = 2.0 * kPi - 0.5;

AxisVector checked(const AxisVector& v) {
  if (!v.allFinite()) throw DomainError("forcing evaluated to a non-finite value");
  return v;
}

AxisVector z_slope(const AxisVector& z, const AxisVector& x) {
  if (!(z.norm() < kStageLimit)) return AxisVector::Constant(std::numeric_limits<double>::quiet_NaN());
  return dexpinv_op(z) * checked(x);
}

Matrix3 rot_x(double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  Matrix3 m;
  m << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
  return m;
}

Matrix3 rot_z(double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  Matrix3 m;
  m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return m;
}

// Runs successive restart segments of a state whose first three components
// are Z; `reset` builds the initial state of the next segment from the exit
// state of the previous one.
template <typename Reset>
std::vector<ZSegment> run_segments(const detail::Rhs& rhs, detail::State y0, double t_end,
                                   const IntegratorConfig& cfg, Reset reset) {
  const double limit = kPi - cfg.restart_margin;
  const detail::EventFn event = [limit](const detail::State& y) {
    return y.head<3>().norm() - limit;
  };
  const detail::StepControl ctl = step_control(cfg);

  std::vector<ZSegment> segments;
  double t = 0.0;
  detail::State y = std::move(y0);
  while (t < t_end) {
    detail::SolveResult res = detail::dopri5(rhs, t, y, t_end, ctl, event);
    ZSegment seg;
    seg.t_start = t;
    seg.t_end = res.t_exit;
    seg.dense = std::move(res.dense);
    segments.push_back(std::move(seg));
    if (!res.event_hit) break;
    if (res.t_exit <= t) throw IntegrationError("restart segment made no progress");
    t = res.t_exit;
    y = reset(res.y_exit);
  }
  return segments;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
  if (!(restart_margin > 0.0 && restart_margin < 0.5 * kPi)) {
    throw ConfigError("restart margin must lie in (0, pi/2)");
  }
  if (!(max_step > 0.0)) throw ConfigError("max_step must be positive");
  if (method_order < 4 || method_order > 5) {
    throw ConfigError("method_order must be 4 or 5 (Dormand-Prince 5(4))");
  }
}

void Trajectory::check_time(double t) const {
  if (!(t >= -kTimeSlack && t <= t_end() + kTimeSlack)) {
    throw DomainError("trajectory evaluated outside its time range");
  }
}

GroupTrajectory::GroupTrajectory(std::vector<ZSegment> segments, AxisVector ref_dir)
    : Trajectory(std::move(ref_dir)), segments_(std::move(segments)) {
  if (segments_.empty()) throw DomainError("GroupTrajectory: no segments");
  prefix_class_.reserve(segments_.size());
  prefix_rot_.reserve(segments_.size());
  prefix_class_.emplace_back();
  prefix_rot_.push_back(Rotation::identity());
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const AxisVector z_end = segments_[i].z_end();
    prefix_class_.push_back(bch(prefix_class_.back().representative(), z_end));
    prefix_rot_.push_back(prefix_rot_.back() * exp_rot(z_end));
  }
}

std::size_t GroupTrajectory::segment_index(double t) const {
  check_time(t);
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const ZSegment& s) { return v < s.t_start; });
  return it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin()) - 1;
}

Rotation GroupTrajectory::eval_A(double t) const {
  const std::size_t i = segment_index(t);
  return prefix_rot_[i] * exp_rot(segments_[i].z(t));
}

BallClass GroupTrajectory::eval_class(double t) const {
  const std::size_t i = segment_index(t);
  return bch(prefix_class_[i].representative(), segments_[i].z(t));
}

std::pair<ZSegment, double> integrate_z_segment(const ForcingSignal& f, double lambda,
                                                double t0, double t_max,
                                                const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(lambda >= 0.0)) throw DomainError("integrate_z_segment: lambda must be >= 0");
  if (!(t0 < t_max)) throw DomainError("integrate_z_segment: requires t0 < t_max");

  const detail::Rhs rhs = [&f, lambda](double t, const detail::State& y, detail::State& dy) {
    const AxisVector z = y.head<3>();
    dy = z_slope(z, f.eval(t, lambda));
  };
  const double limit = kPi - cfg.restart_margin;
  const detail::EventFn event = [limit](const detail::State& y) {
    return y.head<3>().norm() - limit;
  };
  detail::SolveResult res =
      detail::dopri5(rhs, t0, detail::State::Zero(3), t_max, step_control(cfg), event);
  ZSegment seg;
  seg.t_start = t0;
  seg.t_end = res.t_exit;
  seg.dense = std::move(res.dense);
  return {std::move(seg), res.t_exit};
}

GroupTrajectory integrate_group(const ForcingSignal& f, double lambda, double t_end,
                                const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t_end > 0.0)) throw DomainError("integrate_group: t_end must be positive");
  std::vector<ZSegment> segments;
  double t = 0.0;
  while (t < t_end) {
    auto [seg, t_exit] = integrate_z_segment(f, lambda, t, t_end, cfg);
    segments.push_back(std::move(seg));
    if (t_exit >= t_end) break;
    t = t_exit;
  }
  return GroupTrajectory(std::move(segments), f.ref_dir);
}

StateTrajectory::StateTrajectory(std::vector<detail::DenseOutput> pieces, int offset, int dim)
    : pieces_(std::move(pieces)), offset_(offset), dim_(dim) {
  if (pieces_.empty()) throw DomainError("StateTrajectory: no pieces");
}

Eigen::VectorXd StateTrajectory::eval(double t) const {
  if (!(t >= -kTimeSlack && t <= t_end() + kTimeSlack)) {
    throw DomainError("state trajectory evaluated outside its time range");
  }
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const detail::DenseOutput& p) {
                               return v < p.t_begin();
                             });
  if (it != pieces_.begin()) --it;
  return it->eval(t).segment(offset_, dim_);
}

SkewProductSolution integrate_skew_product(const SkewProductSystem& sys,
                                           const Eigen::VectorXd& q0, double lambda,
                                           double t_end, const IntegratorConfig& cfg) {
  cfg.validate();
  if (sys.dim_q < 1) throw DomainError("integrate_skew_product: dim_q must be >= 1");
  if (q0.size() != sys.dim_q) throw DomainError("integrate_skew_product: q0 has wrong size");
  if (!(t_end > 0.0)) throw DomainError("integrate_skew_product: t_end must be positive");

  const int n = 3 + sys.dim_q;
  const int dim_q = sys.dim_q;
  const detail::Rhs rhs = [&sys, lambda, dim_q](double, const detail::State& y,
                                                detail::State& dy) {
    const AxisVector z = y.head<3>();
    const Eigen::VectorXd q = y.tail(dim_q);
    dy.resize(3 + dim_q);
    dy.head<3>() = z_slope(z, sys.x_g(q, lambda));
    const Eigen::VectorXd qdot = sys.x_n(q, lambda);
    if (qdot.size() != dim_q || !qdot.allFinite()) {
      throw DomainError("X_N returned an invalid vector");
    }
    dy.tail(dim_q) = qdot;
  };

  detail::State y0(n);
  y0.head<3>().setZero();
  y0.tail(dim_q) = q0;
  std::vector<ZSegment> segments =
      run_segments(rhs, std::move(y0), t_end, cfg, [](detail::State y) {
        y.head<3>().setZero();
        return y;
      });

  std::vector<detail::DenseOutput> pieces;
  pieces.reserve(segments.size());
  for (const ZSegment& s : segments) pieces.push_back(s.dense);
  StateTrajectory q(std::move(pieces), 3, dim_q);
  return {GroupTrajectory(std::move(segments), sys.ref_dir), std::move(q)};
}

SkewProductSystem stuart_landau_system(double omega_bif, const AxisVector& x0,
                                       const AxisVector& x1) {
  SkewProductSystem sys;
  sys.dim_q = 2;
  sys.ref_dir = x0.normalized();
  sys.x_g = [x0, x1](const Eigen::VectorXd& q, double) -> AxisVector {
    return x0 + q[0] * x1;
  };
  sys.x_n = [omega_bif](const Eigen::VectorXd& q, double lambda) {
    const double r2 = q.squaredNorm();
    Eigen::VectorXd dq(2);
    dq[0] = (lambda - r2) * q[0] - omega_bif * q[1];
    dq[1] = omega_bif * q[0] + (lambda - r2) * q[1];
    return dq;
  };
  return sys;
}

EulerTrajectory::EulerTrajectory(detail::DenseOutput angles, double theta0,
                                 AxisVector ref_dir)
    : Trajectory(std::move(ref_dir)),
      angles_(std::move(angles)),
      initial_inverse_(Rotation(rot_x(theta0)).inverse()) {}

Eigen::Vector3d EulerTrajectory::eval_angles(double t) const {
  check_time(t);
  return angles_.eval(t);
}

Rotation EulerTrajectory::eval_A(double t) const {
  const Eigen::Vector3d a = eval_angles(t);
  return initial_inverse_ * Rotation(rot_z(a[2]) * rot_x(a[1]) * rot_z(a[0]));
}

EulerTrajectory integrate_euler(const ForcingSignal& f, double lambda, double t_end,
                                double theta0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t_end > 0.0)) throw DomainError("integrate_euler: t_end must be positive");
  if (std::abs(std::sin(theta0)) < kGimbalLimit) {
    throw GimbalLockError("integrate_euler: initial theta is at gimbal lock");
  }

  const detail::Rhs rhs = [&f, lambda](double t, const detail::State& y, detail::State& dy) {
    const AxisVector F = checked(f.eval(t, lambda));
    const double phi = y[0];
    const double theta = y[1];
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    const double st = std::sin(theta);
    const double transverse = F.y() * cp + F.x() * sp;
    dy.resize(3);
    dy[0] = F.z() - std::cos(theta) / st * transverse;
    dy[1] = -F.y() * sp + F.x() * cp;
    dy[2] = transverse / st;
  };
  const detail::EventFn gimbal = [](const detail::State& y) {
    return kGimbalLimit - std::abs(std::sin(y[1]));
  };

  detail::State y0(3);
  y0 << 0.0, theta0, 0.0;
  detail::SolveResult res = detail::dopri5(rhs, 0.0, y0, t_end, step_control(cfg), gimbal);
  if (res.event_hit) {
    throw GimbalLockError("integrate_euler: |sin(theta)| fell below 1e-6");
  }
  return EulerTrajectory(std::move(res.dense), theta0, f.ref_dir);
}

AxisVector periodic_continuation(const Trajectory& first_period, double period, double t) {
  if (!(period > 0.0)) throw DomainError("periodic_continuation: period must be positive");
  if (t < 0.0) throw DomainError("periodic_continuation: negative time");
  if (first_period.t_end() < period - kTimeSlack) {
    throw DomainError("periodic_continuation: trajectory does not cover one period");
  }
  const auto cycles = static_cast<long>(std::floor(t / period));
  double local = t - static_cast<double>(cycles) * period;
  local = std::min(local, period);
  AxisVector z = first_period.eval_Z(local);
  if (cycles == 0) return z;
  const AxisVector z_period = first_period.eval_Z(period);
  for (long i = 0; i < cycles; ++i) {
    z = q_map(bch(z_period, z), first_period.ref_dir());
  }
  return z;
}

}  // namespace spherewave
