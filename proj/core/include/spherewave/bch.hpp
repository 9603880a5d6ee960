#pragma once

#include <span>
#include <string_view>

#include "spherewave/so3.hpp"

namespace spherewave {

enum class BchBranch {
  GenericPositive,     ///< product rotation angle < π/2
  GenericNonPositive,  ///< angle in [π/2, π)
  HalfTurnProduct,     ///< angle = π
  IdentityProduct,     ///< e^X e^Y = I
};

std::string_view to_string(BchBranch b);

/// Coefficients and intermediates of the closed-form composition
/// BCH(X, Y) = αX + βY + γ(X × Y).
struct BchBreakdown {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  BchBranch branch = BchBranch::IdentityProduct;

  // Half-angle quaternion quantities of e^X e^Y. `d` is sin θ_prod.
  double e = 1.0;
  double a1 = 0.0;
  double b1 = 0.0;
  double c1 = 0.0;
  double d1 = 0.0;
  double d = 0.0;
  double s = 1.0;
  double k = 0.0;

  double cos_product = 1.0;  ///< (tr(e^X e^Y) − 1)/2
  bool fallback = false;     ///< result taken from log_rot of the product
  BallClass result;
};

/// Tolerance of the branch dispatch.
inline constexpr double kBchBranchTol = 1e-10;

BchBreakdown bch_breakdown(const AxisVector& x, const AxisVector& y);

/// Class of e^X e^Y in the ball model, computed in closed form.
BallClass bch(const AxisVector& x, const AxisVector& y);

/// Left fold of bch over `parts`. Throws DomainError when empty.
BallClass bch_fold(std::span<const AxisVector> parts);

}  // namespace spherewave
