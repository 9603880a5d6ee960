#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spherewave/flow.hpp"
#include "spherewave/so3.hpp"

namespace spherewave {

struct TipSample {
  double t = 0.0;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
};

struct TipTrack {
  double r = 0.0;
  Eigen::Vector3d x0 = Eigen::Vector3d::Zero();
  std::vector<TipSample> samples;
  /// Tip positions at t = i·T, i = 0, 1, … while i·T ≤ t_end.
  std::vector<Eigen::Vector3d> period_samples;
};

/// Tip motion x_tip(t) = A(0)⁻¹A(t)·x0 on the sphere of radius r.
///
/// When `period` is given, period_samples are filled from the trajectory's
/// whole time range. Throws DomainError if |x0| differs from r by more than
/// 1e-9·r.
TipTrack tip_trajectory(const Trajectory& traj, const Eigen::Vector3d& x0, double r,
                        std::span<const double> sample_times,
                        std::optional<double> period = std::nullopt);

struct CircleFit {
  AxisVector axis = AxisVector::UnitZ();
  double height = 0.0;  ///< signed offset of the circle plane along axis
  double radius = 0.0;
  double rms_residual = 0.0;
};

/// Plane fit through the centroid with the least-variance direction as the
/// normal. The axis is oriented toward `reference` when given, otherwise into
/// the north set. Throws FitError for fewer than 3 points or collinear /
/// coincident input.
CircleFit fit_circle(std::span<const Eigen::Vector3d> points,
                     std::optional<AxisVector> reference = std::nullopt);

}  // namespace spherewave
