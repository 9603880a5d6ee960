#include "spherewave/so3.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "spherewave/errors.hpp"

namespace spherewave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerance above which a constructed Rotation is re-projected onto SO(3).
constexpr double kOrthoDrift = 1e-12;
// Inputs further than this from SO(3) are rejected rather than repaired.
constexpr double kOrthoReject = 1e-3;
// Width of the equatorial band treated as the reference hemisphere in q_map.
constexpr double kEquatorBand = 1e-8;

// Sign canonicalization for antipodal representatives.
AxisVector canonical_sign(const AxisVector& v) {
  for (int i = 0; i < 3; ++i) {
    if (v[i] > 0.0) return v;
    if (v[i] < 0.0) return -v;
  }
  return v;
}

// sin(x)/x and (1 - cos x)/x^2.
void rodrigues_coefficients(double x, double& a, double& b) {
  if (x < kSeriesRadius) {
    const double x2 = x * x;
    a = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    b = 0.5 - x2 / 24.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0));
    return;
  }
  const double s = std::sin(0.5 * x);
  a = std::sin(x) / x;
  b = 2.0 * s * s / (x * x);
}

}  // namespace

Matrix3 hat(const AxisVector& v) {
  Matrix3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

AxisVector vee(const Matrix3& m) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("vee: matrix is not skew-symmetric");
  }
  return AxisVector(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
                    0.5 * (m(1, 0) - m(0, 1)));
}

Rotation::Rotation(const Matrix3& m) : m_(m) {
  if (!m.allFinite()) throw DomainError("Rotation: non-finite entries");
  const double defect = orthogonality_defect();
  if (defect > kOrthoReject) {
    throw DomainError("Rotation: matrix is not orthogonal");
  }
  if (m.determinant() <= 0.0) {
    throw DomainError("Rotation: determinant is not positive");
  }
  if (defect > kOrthoDrift) {
    Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    m_ = svd.matrixU() * svd.matrixV().transpose();
  }
}

Rotation Rotation::inverse() const { return Rotation(m_.transpose(), Trusted{}); }

Rotation Rotation::operator*(const Rotation& other) const {
  return Rotation(m_ * other.m_);
}

double Rotation::orthogonality_defect() const {
  return (m_.transpose() * m_ - Matrix3::Identity()).norm();
}

double distance(const Rotation& a, const Rotation& b) {
  return (a.matrix() - b.matrix()).norm();
}

BallClass::BallClass(const AxisVector& v) : v_(v) {
  if (!v.allFinite()) throw DomainError("BallClass: non-finite vector");
  const double n = v.norm();
  if (n > kPi + 1e-12) {
    throw DomainError("BallClass: representative norm exceeds pi");
  }
  if (n >= kPi) {
    v_ = canonical_sign(v * (kPi / n));
  }
}

BallClass BallClass::reduce(const AxisVector& v) {
  if (!v.allFinite()) throw DomainError("BallClass::reduce: non-finite vector");
  const double n = v.norm();
  if (n <= kPi) return BallClass(v);
  const double m = std::fmod(n, kTwoPi);
  const AxisVector unit = v / n;
  if (m <= kPi) return BallClass(unit * m);
  return BallClass(-unit * (kTwoPi - m));
}

bool BallClass::on_boundary() const { return v_.norm() >= kPi; }

bool operator==(const BallClass& a, const BallClass& b) {
  if (a.v_ == b.v_) return true;
  return a.on_boundary() && b.on_boundary() && a.v_ == -b.v_;
}

bool approx_equal(const BallClass& a, const BallClass& b, double tol) {
  const AxisVector& u = a.representative();
  const AxisVector& w = b.representative();
  if ((u - w).norm() <= tol) return true;
  return u.norm() >= kPi - tol && w.norm() >= kPi - tol && (u + w).norm() <= tol;
}

AngleAxis to_angle_axis(const BallClass& c) {
  AngleAxis aa;
  aa.angle = c.angle();
  if (aa.angle > 0.0) aa.axis = c.representative() / aa.angle;
  return aa;
}

Rotation exp_rot(const AxisVector& v) {
  const double x = v.norm();
  double a = 0.0;
  double b = 0.0;
  rodrigues_coefficients(x, a, b);
  const Matrix3 k = hat(v);
  return Rotation(Matrix3::Identity() + a * k + b * k * k, Rotation::Trusted{});
}

BallClass log_rot(const Rotation& r) {
  const Matrix3& m = r.matrix();
  const AxisVector anti(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
                        0.5 * (m(1, 0) - m(0, 1)));
  const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
  const double s = anti.norm();
  const double angle = std::atan2(s, c);

  if (angle < kSeriesRadius) {
    // anti = sin(angle)·n, so v = anti·angle/sin(angle).
    const double a2 = angle * angle;
    return BallClass(anti * (1.0 + a2 / 6.0 * (1.0 + 7.0 * a2 / 60.0)));
  }
  if (c >= 0.0) {
    return BallClass(anti * (angle / s));
  }

  // Symmetric part: (R + Rᵀ)/2 − cos·I = (1 − cos)·n nᵀ.
  const Matrix3 sym = 0.5 * (m + m.transpose()) - c * Matrix3::Identity();
  const double one_minus_c = 1.0 - c;
  int j = 0;
  sym.diagonal().maxCoeff(&j);
  AxisVector n = sym.col(j) / std::sqrt(std::max(sym(j, j), 0.0) * one_minus_c);
  n.normalize();
  if (s > 1e-14) {
    if (n.dot(anti) < 0.0) n = -n;
  } else {
    n = canonical_sign(n);
  }
  return BallClass(n * std::min(angle, kPi));
}

bool in_north_set(const AxisVector& u) {
  constexpr double tol = 1e-14;
  if (u.z() > tol) return true;
  if (u.z() < -tol) return false;
  if (u.y() > tol) return true;
  if (u.y() < -tol) return false;
  return u.x() < 0.0;
}

Rotation pole_alignment(const AxisVector& ref_dir) {
  const AxisVector ez = AxisVector::UnitZ();
  const double c = std::clamp(ref_dir.dot(ez), -1.0, 1.0);
  const AxisVector axis = ref_dir.cross(ez);
  const double s = axis.norm();
  if (s < 1e-15) {
    if (c > 0.0) return Rotation::identity();
    return exp_rot(AxisVector(kPi, 0.0, 0.0));
  }
  return exp_rot(axis * (std::atan2(s, c) / s));
}

AxisVector q_map(const BallClass& c, const AxisVector& ref_dir) {
  if (std::abs(ref_dir.norm() - 1.0) > 1e-10) {
    throw DomainError("q_map: reference direction is not a unit vector");
  }
  const AxisVector& y = c.representative();
  const double n = y.norm();
  if (n == 0.0) return y;

  const Rotation align = pole_alignment(ref_dir);
  const bool north = in_north_set(align * (y / n));
  if (c.on_boundary()) {
    // Both ±y represent the class; keep the one in the reference hemisphere.
    return north ? y : AxisVector(-y);
  }
  // Off the boundary the hemisphere is closed: directions on (or within
  // integration noise of) the equator keep their representative.
  if (north || (align * y).z() >= -kEquatorBand * n) return y;
  return (1.0 - kTwoPi / n) * y;
}

Matrix3 dexp_op(const AxisVector& z) {
  const double x = z.norm();
  const double x2 = x * x;
  double b = 0.0;
  if (x < kDexpSeriesRadius) {
    // (x − sin x)/x³ = Σ (−1)ⁿ x²ⁿ/(2n+3)!
    double term = 1.0 / 6.0;
    for (int n = 0; n < 9; ++n) {
      b += term;
      term *= -x2 / ((2.0 * n + 4.0) * (2.0 * n + 5.0));
    }
  } else {
    b = (x - std::sin(x)) / (x2 * x);
  }
  // (cos x − 1)/x² = −½·sinc²(x/2), free of cancellation.
  const double h = 0.5 * x;
  const double sinc_h = h < kSeriesRadius ? 1.0 - h * h / 6.0 : std::sin(h) / h;
  const double a = -0.5 * sinc_h * sinc_h;
  const Matrix3 k = hat(z);
  return Matrix3::Identity() + a * k + b * k * k;
}

double dexpinv_c2(double x) {
  if (x < kDexpSeriesRadius) {
    // |B₂ₙ|/(2n)! for n = 1..8.
    constexpr double coef[] = {
        1.0 / 12.0,
        1.0 / 720.0,
        1.0 / 30240.0,
        1.0 / 1209600.0,
        1.0 / 47900160.0,
        691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        3617.0 / 510.0 / 20922789888000.0,
    };
    const double x2 = x * x;
    double sum = 0.0;
    for (int n = 7; n >= 0; --n) sum = sum * x2 + coef[n];
    return sum;
  }
  const double h = 0.5 * x;
  return 1.0 / (x * x) - std::cos(h) / (2.0 * std::sin(h) * x);
}

Matrix3 dexpinv_op(const AxisVector& z) {
  const double x = z.norm();
  if (!(x < kTwoPi - 1e-6)) {
    throw SingularityError("dexpinv_op: |Z| too close to 2*pi");
  }
  const Matrix3 k = hat(z);
  return Matrix3::Identity() + 0.5 * k + dexpinv_c2(x) * k * k;
}

}  // namespace spherewave
