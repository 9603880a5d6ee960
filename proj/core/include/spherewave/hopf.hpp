#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "spherewave/flow.hpp"
#include "spherewave/so3.hpp"

namespace spherewave {

inline constexpr double kResTol = 1e-9;
inline constexpr double kOrthoTol = 1e-6;

enum class ResonanceKind { NonResonant, Resonant, Degenerate };

struct ResonanceClass {
  ResonanceKind kind = ResonanceKind::NonResonant;
  int k = 0;  ///< nonzero only when Resonant
  double omega_bif = 0.0;
  double x0_norm = 0.0;
};

/// Resonant(k) iff |x0_norm − k·ω_bif| < res_tol·|ω_bif| for k = round(x0_norm/ω_bif) ≠ 0.
ResonanceClass resonance_class(double x0_norm, double omega_bif, double res_tol = kResTol);

enum class MotionKind {
  RigidRotation,
  MeanderO1,
  SlowMeanderAboutX0,
  OrthogonalDrift,
  PeriodicSolution,
};

std::string_view to_string(ResonanceKind k);
std::string_view to_string(MotionKind m);

struct FrequencyReport {
  double lambda = 0.0;
  AxisVector X = AxisVector::Zero();
  AxisVector Xf = AxisVector::Zero();
  ResonanceClass resonance;
  /// k with |X0|T(0) = α0 + 2kπ.
  int k_winding = 0;
  /// ⟨X̂, X̂0⟩; empty when X = 0.
  std::optional<double> ortho_defect;
  MotionKind motion = MotionKind::RigidRotation;
};

/// X(λ) = q(Z(T))/T. Throws DomainError when the trajectory ends before T.
AxisVector primary_frequency(const Trajectory& traj, double period, const AxisVector& ref_dir);

/// Lifted branch X^f with k = floor(|x0|·T0/2π + res_tol/2).
AxisVector lifted_frequency(const AxisVector& X, double T0, const AxisVector& x0,
                            double omega_lambda, const ResonanceClass& res,
                            double res_tol = kResTol);

/// Periodic factors B(t) = e^{−Xt}A(t) and B^f(t) = e^{BCH(−X^f t, Z(t))}.
///
/// log_Bf is the ball-model representative, so its norm stays small when B^f
/// is close to I whatever its direction.
///
/// Holds a reference to the trajectory, which must outlive it.
class PeriodicPart {
 public:
  PeriodicPart(const Trajectory& traj, AxisVector X, AxisVector Xf)
      : traj_(&traj), X_(std::move(X)), Xf_(std::move(Xf)) {}

  Rotation eval_B(double t) const;
  Rotation eval_Bf(double t) const { return exp_rot(log_Bf(t)); }
  AxisVector log_Bf(double t) const;

 private:
  const Trajectory* traj_;
  AxisVector X_;
  AxisVector Xf_;
};

/// Fills the resonance class, lifted branch and motion label for X(λ).
/// `period` is T(λ) = 2π/|ω_λ|.
FrequencyReport classify(double lambda, const AxisVector& x0, double omega_bif,
                         const AxisVector& X, double period, double res_tol = kResTol,
                         double ortho_tol = kOrthoTol);

/// Forcing family (λ, μ) ↦ X^G(·, λ, μ).
using ForcingFamily = std::function<ForcingSignal(double lambda, double mu)>;

struct OrthogonalBranch {
  double mu = 0.0;
  double g = 0.0;  ///< ⟨X(λ, μ*), X̂0⟩
  int evaluations = 0;
  bool converged = false;
};

/// Root μ* of g(μ) = ⟨X(λ, μ), X̂0⟩ in [mu_lo, mu_hi] by Illinois regula falsi
/// with bisection safeguard. λ = 0 returns μ* = 0. Throws BracketError when g
/// has no sign change on the bracket.
OrthogonalBranch find_orthogonal_branch(const ForcingFamily& family, double lambda,
                                        double mu_lo, double mu_hi, const AxisVector& x0,
                                        const IntegratorConfig& cfg = {},
                                        double g_tol = 1e-10);

}  // namespace spherewave
