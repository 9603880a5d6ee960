#include "spherewave/tip.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "spherewave/errors.hpp"

namespace spherewave {

TipTrack tip_trajectory(const Trajectory& traj, const Eigen::Vector3d& x0, double r,
                        std::span<const double> sample_times, std::optional<double> period) {
  if (!(r > 0.0)) throw DomainError("tip_trajectory: radius must be positive");
  if (std::abs(x0.norm() - r) > 1e-9 * r) {
    throw DomainError("tip_trajectory: x0 is not on the sphere of radius r");
  }
  TipTrack track;
  track.r = r;
  track.x0 = x0;
  const Rotation a0_inv = traj.eval_A(0.0).inverse();
  track.samples.reserve(sample_times.size());
  for (double t : sample_times) {
    track.samples.push_back({t, (a0_inv * traj.eval_A(t)) * x0});
  }
  if (period) {
    const double T = *period;
    if (!(T > 0.0)) throw DomainError("tip_trajectory: period must be positive");
    const auto n = static_cast<long>(std::floor(traj.t_end() / T * (1.0 + 1e-12)));
    for (long i = 0; i <= n; ++i) {
      const double t = std::min(static_cast<double>(i) * T, traj.t_end());
      track.period_samples.push_back((a0_inv * traj.eval_A(t)) * x0);
    }
  }
  return track;
}

CircleFit fit_circle(std::span<const Eigen::Vector3d> points, std::optional<AxisVector> reference) {
  if (points.size() < 3) throw FitError("fit_circle: need at least 3 points");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d ev = eig.eigenvalues();
  // A plane is determined only if the points span two directions.
  if (!(ev[2] > 0.0) || ev[1] <= 1e-14 * ev[2]) {
    throw FitError("fit_circle: points are coincident or collinear");
  }

  AxisVector axis = eig.eigenvectors().col(0).normalized();
  if (reference) {
    if (axis.dot(*reference) < 0.0) axis = -axis;
  } else if (!in_north_set(axis)) {
    axis = -axis;
  }

  CircleFit fit;
  fit.axis = axis;
  fit.height = centroid.dot(axis);
  const Eigen::Vector3d center = fit.height * axis;
  double radius_sum = 0.0;
  double sq = 0.0;
  for (const auto& p : points) {
    const double off = p.dot(axis) - fit.height;
    sq += off * off;
    radius_sum += (p - center - off * axis).norm();
  }
  const auto n = static_cast<double>(points.size());
  fit.radius = radius_sum / n;
  fit.rms_residual = std::sqrt(sq / n);
  return fit;
}

}  // namespace spherewave
