#pragma once

#include <Eigen/Dense>

namespace spherewave {

/// Element of so(3) in its 3-vector form. Depending on context this is an
/// angular velocity (rad/time) or a rotation increment (rad).
using AxisVector = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Radius below which trigonometric coefficients switch to Taylor series.
inline constexpr double kSeriesRadius = 1e-4;
/// Below this norm the dexp/dexpinv coefficients use their power series.
inline constexpr double kDexpSeriesRadius = 0.5;

Matrix3 hat(const AxisVector& v);

/// Inverse of hat. Throws DomainError when `m` is not skew-symmetric
/// within 1e-10.
AxisVector vee(const Matrix3& m);

/// Proper orthogonal 3×3 matrix.
///
/// The constructor accepts matrices that are orthogonal up to small drift and
/// re-orthonormalizes them (polar projection via SVD). Inputs with det ≤ 0 or
/// grossly non-orthogonal inputs are rejected with DomainError.
class Rotation {
 public:
  Rotation() : m_(Matrix3::Identity()) {}
  explicit Rotation(const Matrix3& m);

  static Rotation identity() { return Rotation(); }

  const Matrix3& matrix() const { return m_; }
  Rotation inverse() const;
  Rotation operator*(const Rotation& other) const;
  AxisVector operator*(const AxisVector& v) const { return m_ * v; }

  /// Frobenius norm of mᵀm − I.
  double orthogonality_defect() const;

 private:
  struct Trusted {};
  Rotation(const Matrix3& m, Trusted) : m_(m) {}
  friend Rotation exp_rot(const AxisVector& v);

  Matrix3 m_;
};

/// Frobenius distance between two rotations.
double distance(const Rotation& a, const Rotation& b);

/// Point of the ball model of SO(3): vectors of norm ≤ π with antipodal
/// points of the boundary sphere identified.
class BallClass {
 public:
  BallClass() : v_(AxisVector::Zero()) {}

  /// Throws DomainError when ‖v‖ > π + 1e-12; norms in (π, π + 1e-12] are
  /// snapped to π.
  explicit BallClass(const AxisVector& v);

  /// Class of exp_rot(v) for any v, computed by angle arithmetic.
  static BallClass reduce(const AxisVector& v);

  /// Stored representative. On the boundary the sign is canonicalized so the
  /// first nonzero component is positive.
  const AxisVector& representative() const { return v_; }
  double angle() const { return v_.norm(); }
  bool on_boundary() const;

  friend bool operator==(const BallClass& a, const BallClass& b);

 private:
  AxisVector v_;
};

/// Class equality with a tolerance: ‖u − w‖ ≤ tol, or both near the boundary
/// with ‖u + w‖ ≤ tol.
bool approx_equal(const BallClass& a, const BallClass& b, double tol);

struct AngleAxis {
  double angle = 0.0;                    ///< radians in [0, π]
  AxisVector axis = AxisVector::UnitZ();  ///< unit; arbitrary when angle = 0
};

AngleAxis to_angle_axis(const BallClass& c);

/// Rodrigues exponential.
Rotation exp_rot(const AxisVector& v);

/// Logarithm into the ball model (the map d* with exp_rot(d*(R)) = R).
BallClass log_rot(const Rotation& r);

/// Membership in the closed north hemisphere
/// {z > 0} ∪ {z = 0, x ∈ [−1, 1), y ∈ [0, 1]} of a unit vector.
bool in_north_set(const AxisVector& unit);

/// Rotation taking `ref_dir` to +z (the minimal one; a half turn about x
/// when ref_dir = −z).
Rotation pole_alignment(const AxisVector& ref_dir);

/// Picks the so(3) representative of `c` whose direction shares the
/// hemisphere centered at `ref_dir`; otherwise maps Y to (1 − 2π/|Y|)·Y.
/// The returned vector always satisfies exp_rot(q) = exp_rot(c).
/// Throws DomainError when ref_dir is not unit within 1e-10.
AxisVector q_map(const BallClass& c, const AxisVector& ref_dir);

/// Differential of the exponential in the right trivialization:
/// I + ((cos|Z| − 1)/|Z|²)·Z + ((|Z| − sin|Z|)/|Z|³)·Z².
Matrix3 dexp_op(const AxisVector& z);

/// Inverse of dexp_op: I + ½·Z + c₂(|Z|)·Z². Throws SingularityError when
/// |Z| ≥ 2π − 1e-6.
Matrix3 dexpinv_op(const AxisVector& z);

/// c₂(x) = 1/x² − cos(x/2) / (2 x sin(x/2)), with its series below
/// kDexpSeriesRadius.
double dexpinv_c2(double x);

}  // namespace spherewave
