#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "spherewave/detail/dopri5.hpp"
#include "spherewave/so3.hpp"

namespace spherewave {

/// Time-dependent generator X^G(t, λ) of the group equation Ȧ = A·X^G.
struct ForcingSignal {
  std::function<AxisVector(double t, double lambda)> eval;
  /// Relative period T(λ) = 2π/|ω_λ|.
  std::function<double(double lambda)> period;
  /// Unit frequency direction of the underlying rotating wave; selects the
  /// q-map hemisphere of the global Z.
  AxisVector ref_dir = AxisVector::UnitZ();
};

/// Reduced skew-product system Ȧ = A·X_G(q, λ), q̇ = X_N(q, λ).
struct SkewProductSystem {
  std::function<AxisVector(const Eigen::VectorXd& q, double lambda)> x_g;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& q, double lambda)> x_n;
  int dim_q = 1;
  AxisVector ref_dir = AxisVector::UnitZ();
};

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Segments restart once |Z| reaches π − restart_margin.
  double restart_margin = 0.1;
  double max_step = std::numeric_limits<double>::infinity();
  /// Minimum accepted order; the integrator is a 5(4) embedded pair.
  int method_order = 5;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// A computed solution A(t) of the group equation with A(0) = I.
class Trajectory {
 public:
  explicit Trajectory(AxisVector ref_dir) : ref_dir_(std::move(ref_dir)) {}
  virtual ~Trajectory() = default;

  virtual Rotation eval_A(double t) const = 0;
  /// d*(A(t)) in the ball model. Defaults to log_rot(eval_A(t)).
  virtual BallClass eval_class(double t) const { return log_rot(eval_A(t)); }
  virtual double t_end() const = 0;

  /// Global exponential coordinates Z(t) ∈ q(D) with exp_rot(Z) = A(t).
  AxisVector eval_Z(double t) const { return q_map(eval_class(t), ref_dir_); }
  const AxisVector& ref_dir() const { return ref_dir_; }

 protected:
  void check_time(double t) const;

 private:
  AxisVector ref_dir_;
};

/// Solution of the Z-equation on one restart interval, Z(t_start) = 0.
struct ZSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  /// Dense output of the integrated state; Z occupies the first three
  /// components.
  detail::DenseOutput dense;

  AxisVector z(double t) const { return dense.eval(t).head<3>(); }
  AxisVector z_end() const { return z(t_end); }
};

/// Z-formulation trajectory: segments chained by BCH.
///
/// On segment i, Z(t) = q(BCH(Z_1(t_1), …, Z_{i−1}(t_{i−1}), Z_i(t))); the
/// rotation is evaluated independently as the matrix product
/// e^{Z_1(t_1)}⋯e^{Z_{i−1}(t_{i−1})}·e^{Z_i(t)}.
class GroupTrajectory : public Trajectory {
 public:
  GroupTrajectory(std::vector<ZSegment> segments, AxisVector ref_dir);

  Rotation eval_A(double t) const override;
  BallClass eval_class(double t) const override;
  double t_end() const override { return segments_.back().t_end; }

  const std::vector<ZSegment>& segments() const { return segments_; }
  /// Chained class of the segments preceding segment i.
  const BallClass& chained_prefix(std::size_t i) const { return prefix_class_[i]; }

 private:
  std::size_t segment_index(double t) const;

  std::vector<ZSegment> segments_;
  std::vector<BallClass> prefix_class_;
  std::vector<Rotation> prefix_rot_;
};

/// Solves Ż = dexpinv(Z)·X^G(t, λ), Z(t0) = 0, up to the first time |Z|
/// reaches π − restart_margin or t_max. Returns the segment and its exit
/// time.
std::pair<ZSegment, double> integrate_z_segment(const ForcingSignal& f, double lambda,
                                                double t0, double t_max,
                                                const IntegratorConfig& cfg = {});

/// Integrates Ȧ = A·X^G(t, λ), A(0) = I over [0, t_end] by restarting the
/// Z-equation at each segment exit.
GroupTrajectory integrate_group(const ForcingSignal& f, double lambda, double t_end,
                                const IntegratorConfig& cfg = {});

/// Dense trajectory of the normal coordinates q(t).
class StateTrajectory {
 public:
  StateTrajectory(std::vector<detail::DenseOutput> pieces, int offset, int dim);
  Eigen::VectorXd eval(double t) const;
  double t_end() const { return pieces_.back().t_end(); }

 private:
  std::vector<detail::DenseOutput> pieces_;
  int offset_;
  int dim_;
};

struct SkewProductSolution {
  GroupTrajectory group;
  StateTrajectory q;
};

/// Co-integrates q̇ = X_N(q, λ) with the Z-equation driven by X_G(q(t), λ).
SkewProductSolution integrate_skew_product(const SkewProductSystem& sys,
                                           const Eigen::VectorXd& q0, double lambda,
                                           double t_end,
                                           const IntegratorConfig& cfg = {});

/// Stuart–Landau normal form q̇ = (λ + iω)q − |q|²q on q = (Re, Im), with
/// X_G(q, λ) = x0 + Re(q)·x1.
SkewProductSystem stuart_landau_system(double omega_bif, const AxisVector& x0,
                                       const AxisVector& x1);

/// Euler-angle trajectory A(t) = A(0)⁻¹·R_z(ψ)R_x(θ)R_z(φ).
class EulerTrajectory : public Trajectory {
 public:
  EulerTrajectory(detail::DenseOutput angles, double theta0, AxisVector ref_dir);

  Rotation eval_A(double t) const override;
  double t_end() const override { return angles_.t_end(); }
  /// (φ, θ, ψ) at time t.
  Eigen::Vector3d eval_angles(double t) const;

 private:
  detail::DenseOutput angles_;
  Rotation initial_inverse_;
};

/// Integrates the Euler-angle form of the group equation from
/// (φ, θ, ψ) = (0, θ0, 0). Throws GimbalLockError when |sin θ| < 1e-6.
EulerTrajectory integrate_euler(const ForcingSignal& f, double lambda, double t_end,
                                double theta0, const IntegratorConfig& cfg = {});

/// Periodic continuation of a trajectory known on [0, T]:
/// Z^i(t) = q(BCH(Z^0(T), Z^{i−1}(t − T))).
AxisVector periodic_continuation(const Trajectory& first_period, double period, double t);

}  // namespace spherewave
