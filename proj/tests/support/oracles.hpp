#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <cstdint>
#include <numbers>
#include <random>

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kPi = std::numbers::pi;

/// Unit quaternion (w, x, y, z) composition.
struct Quat {
  double w = 1.0;
  Vec3 v = Vec3::Zero();

  static Quat from_rotation_vector(const Vec3& r) {
    const double a = r.norm();
    if (a == 0.0) return {};
    return {std::cos(0.5 * a), std::sin(0.5 * a) * r / a};
  }

  Quat operator*(const Quat& o) const {
    return {w * o.w - v.dot(o.v), w * o.v + o.w * v + v.cross(o.v)};
  }

  /// Rotation vector of angle in [0, π].
  Vec3 rotation_vector() const {
    Quat q = *this;
    if (q.w < 0.0) {
      q.w = -q.w;
      q.v = -q.v;
    }
    const double s = q.v.norm();
    if (s == 0.0) return Vec3::Zero();
    return (2.0 * std::atan2(s, q.w) / s) * q.v;
  }

  Mat3 matrix() const {
    const double x = v.x(), y = v.y(), z = v.z();
    Mat3 m;
    m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return m;
  }
};

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

/// exp(M) by scaling and squaring of the Taylor series.
inline Mat3 expm_series(const Mat3& m) {
  int squarings = 0;
  double n = m.norm();
  while (n > 0.25) {
    n *= 0.5;
    ++squarings;
  }
  const Mat3 a = m / std::pow(2.0, squarings);
  Mat3 term = Mat3::Identity();
  Mat3 sum = Mat3::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// c₂(x) = 1/x² − cot(x/2)/(2x) from z·cot z = Σ (−1)ⁿ 2²ⁿ B₂ₙ z²ⁿ/(2n)!.
inline double dexpinv_c2_bernoulli(double x) {
  // B2, B4, ..., B12
  constexpr double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
  const double z = 0.5 * x;
  // z cot z = 1 − Σ_{n≥1} c_n z^{2n}; c₂(x) = (1 − z cot z)/x².
  double one_minus = 0.0;
  double fact = 1.0;
  double pow4 = 1.0;
  double z2n = 1.0;
  for (int n = 1; n <= 6; ++n) {
    fact *= (2.0 * n - 1) * (2.0 * n);
    pow4 *= 4.0;
    z2n *= z * z;
    const double sign = (n % 2 == 1) ? -1.0 : 1.0;
    one_minus -= sign * pow4 * bern[n - 1] / fact * z2n;
  }
  return one_minus / (x * x);
}

/// Eighth-order central difference of a matrix-valued function.
inline Mat3 derivative(const std::function<Mat3(double)>& f, double t, double h) {
  constexpr double c[] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  Mat3 d = Mat3::Zero();
  for (int k = 1; k <= 4; ++k) d += c[k - 1] * (f(t + k * h) - f(t - k * h));
  return d / h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  Vec3 unit() {
    std::normal_distribution<double> n;
    Vec3 v(n(gen_), n(gen_), n(gen_));
    while (v.norm() < 1e-6) v = Vec3(n(gen_), n(gen_), n(gen_));
    return v.normalized();
  }

  Vec3 vector(double norm_lo, double norm_hi) { return unit() * uniform(norm_lo, norm_hi); }

  /// Haar-distributed rotation via a normalized Gaussian quaternion.
  Mat3 rotation() {
    std::normal_distribution<double> n;
    Eigen::Vector4d q(n(gen_), n(gen_), n(gen_), n(gen_));
    q.normalize();
    return Quat{q[0], Vec3(q[1], q[2], q[3])}.matrix();
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace oracle
