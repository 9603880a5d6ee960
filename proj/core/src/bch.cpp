#include "spherewave/bch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spherewave/errors.hpp"

namespace spherewave {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this |cos θ_prod| the arcsine in k(X, Y) loses more than ~1e-10.
constexpr double kAsinConditioning = 1e-6;

}  // namespace

std::string_view to_string(BchBranch b) {
  switch (b) {
    case BchBranch::GenericPositive: return "GenericPositive";
    case BchBranch::GenericNonPositive: return "GenericNonPositive";
    case BchBranch::HalfTurnProduct: return "HalfTurnProduct";
    case BchBranch::IdentityProduct: return "IdentityProduct";
  }
  return "?";
}

BchBreakdown bch_breakdown(const AxisVector& x, const AxisVector& y) {
  BchBreakdown out;
  const double nx = x.norm();
  const double ny = y.norm();
  const double hx = 0.5 * nx;
  const double hy = 0.5 * ny;
  const double cx = std::cos(hx);
  const double sx = std::sin(hx);
  const double cy = std::cos(hy);
  const double sy = std::sin(hy);

  double cos_angle = 0.0;
  double sin2_angle = 0.0;
  if (nx > 0.0 && ny > 0.0) {
    cos_angle = std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
    sin2_angle = x.cross(y).squaredNorm() / (nx * nx * ny * ny);
  }

  out.e = cx * cy - sx * sy * cos_angle;
  out.a1 = sx * cy;
  out.b1 = sy * cx;
  out.c1 = sx * sy;
  out.d1 = std::sqrt(std::max(0.0, out.a1 * out.a1 + out.b1 * out.b1 +
                                       2.0 * out.a1 * out.b1 * cos_angle +
                                       out.c1 * out.c1 * sin2_angle));
  out.d = 2.0 * out.d1 * std::abs(out.e);
  out.s = out.e < 0.0 ? -1.0 : 1.0;

  const double h_alpha = nx > 0.0 ? out.a1 / nx : cy;
  const double h_beta = ny > 0.0 ? out.b1 / ny : cx;
  double h_gamma = 1.0;
  if (nx > 0.0 && ny > 0.0) {
    h_gamma = out.c1 / (nx * ny);
  } else if (ny > 0.0) {
    h_gamma = sy / ny;
  } else if (nx > 0.0) {
    h_gamma = sx / nx;
  }

  const Rotation product = exp_rot(x) * exp_rot(y);
  const Matrix3& p = product.matrix();
  out.cos_product = std::clamp(0.5 * (p.trace() - 1.0), -1.0, 1.0);
  const double theta = std::acos(out.cos_product);

  if ((p - Matrix3::Identity()).norm() <= kBchBranchTol) {
    out.branch = BchBranch::IdentityProduct;
    out.k = out.s;
    out.result = BallClass();
    return out;
  }
  if (theta >= kPi - kBchBranchTol) {
    out.branch = BchBranch::HalfTurnProduct;
    out.k = kPi;
    out.fallback = true;
    out.result = log_rot(product);
    return out;
  }

  if (out.cos_product > kBchBranchTol) {
    out.branch = BchBranch::GenericPositive;
    out.k = out.s * std::asin(std::min(out.d, 1.0)) / out.d1;
  } else {
    out.branch = BchBranch::GenericNonPositive;
    out.k = out.s * (kPi - std::asin(std::min(out.d, 1.0))) / out.d1;
  }

  if (out.d1 < 1e-12) {
    out.fallback = true;
    out.result = log_rot(product);
    return out;
  }

  out.alpha = out.k * h_alpha;
  out.beta = out.k * h_beta;
  out.gamma = out.k * h_gamma;
  if (std::abs(out.cos_product) < kAsinConditioning) {
    out.fallback = true;
    out.result = log_rot(product);
    return out;
  }
  out.result = BallClass(out.alpha * x + out.beta * y + out.gamma * x.cross(y));
  return out;
}

BallClass bch(const AxisVector& x, const AxisVector& y) {
  return bch_breakdown(x, y).result;
}

BallClass bch_fold(std::span<const AxisVector> parts) {
  if (parts.empty()) throw DomainError("bch_fold: empty list");
  BallClass acc = BallClass::reduce(parts.front());
  for (const AxisVector& p : parts.subspan(1)) {
    acc = bch(acc.representative(), p);
  }
  return acc;
}

}  // namespace spherewave
