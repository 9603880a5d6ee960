#include "spherewave/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spherewave/bch.hpp"
#include "spherewave/errors.hpp"

namespace spherewave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPeriodicTol = 1e-9;
constexpr int kMaxRootIterations = 200;

}  // namespace

std::string_view to_string(ResonanceKind k) {
  switch (k) {
    case ResonanceKind::NonResonant: return "NonResonant";
    case ResonanceKind::Resonant: return "Resonant";
    case ResonanceKind::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string_view to_string(MotionKind m) {
  switch (m) {
    case MotionKind::RigidRotation: return "RigidRotation";
    case MotionKind::MeanderO1: return "MeanderO1";
    case MotionKind::SlowMeanderAboutX0: return "SlowMeanderAboutX0";
    case MotionKind::OrthogonalDrift: return "OrthogonalDrift";
    case MotionKind::PeriodicSolution: return "PeriodicSolution";
  }
  return "?";
}

ResonanceClass resonance_class(double x0_norm, double omega_bif, double res_tol) {
  if (omega_bif == 0.0) throw DomainError("resonance_class: omega_bif must be nonzero");
  ResonanceClass rc;
  rc.omega_bif = omega_bif;
  rc.x0_norm = x0_norm;
  if (x0_norm == 0.0) {
    rc.kind = ResonanceKind::Degenerate;
    return rc;
  }
  const double w = std::abs(omega_bif);
  const auto k = static_cast<int>(std::lround(x0_norm / w));
  if (k != 0 && std::abs(x0_norm - k * w) < res_tol * w) {
    rc.kind = ResonanceKind::Resonant;
    rc.k = k;
  }
  return rc;
}

AxisVector primary_frequency(const Trajectory& traj, double period, const AxisVector& ref_dir) {
  if (!(period > 0.0)) throw DomainError("primary_frequency: period must be positive");
  if (traj.t_end() < period * (1.0 - 1e-14)) {
    throw DomainError("primary_frequency: trajectory does not reach T");
  }
  return q_map(traj.eval_class(period), ref_dir) / period;
}

AxisVector lifted_frequency(const AxisVector& X, double T0, const AxisVector& x0,
                            double omega_lambda, const ResonanceClass& res, double res_tol) {
  const auto k = static_cast<int>(std::floor(x0.norm() * T0 / kTwoPi + 0.5 * res_tol));
  if (k == 0) return X;
  const double shift = k * std::abs(omega_lambda);
  const double n = X.norm();
  if (n > 0.0) return ((n + shift) / n) * X;
  if (res.kind != ResonanceKind::Resonant) {
    throw InternalInconsistency("lifted_frequency: X = 0 outside the resonant class");
  }
  return shift * x0.normalized();
}

Rotation PeriodicPart::eval_B(double t) const {
  return exp_rot(-X_ * t) * traj_->eval_A(t);
}

AxisVector PeriodicPart::log_Bf(double t) const {
  return bch(-Xf_ * t, traj_->eval_Z(t)).representative();
}

FrequencyReport classify(double lambda, const AxisVector& x0, double omega_bif,
                         const AxisVector& X, double period, double res_tol,
                         double ortho_tol) {
  if (!(period > 0.0)) throw DomainError("classify: period must be positive");
  FrequencyReport r;
  r.lambda = lambda;
  r.X = X;
  r.resonance = resonance_class(x0.norm(), omega_bif, res_tol);

  const double T0 = kTwoPi / std::abs(omega_bif);
  r.k_winding = static_cast<int>(std::floor(x0.norm() * T0 / kTwoPi + 0.5 * res_tol));
  if (X.norm() > 0.0 && x0.norm() > 0.0) {
    r.ortho_defect = X.normalized().dot(x0.normalized());
  }
  r.Xf = r.resonance.kind == ResonanceKind::Degenerate
             ? X
             : lifted_frequency(X, T0, x0, kTwoPi / period, r.resonance, res_tol);

  const double turns = X.norm() * period / kTwoPi;
  if (lambda == 0.0) {
    r.motion = MotionKind::RigidRotation;
  } else if (std::abs(turns - std::round(turns)) * kTwoPi < kPeriodicTol) {
    r.motion = MotionKind::PeriodicSolution;
  } else if (r.resonance.kind != ResonanceKind::Resonant) {
    r.motion = MotionKind::MeanderO1;
  } else if (r.ortho_defect && std::abs(*r.ortho_defect) < ortho_tol) {
    r.motion = MotionKind::OrthogonalDrift;
  } else {
    r.motion = MotionKind::SlowMeanderAboutX0;
  }
  return r;
}

OrthogonalBranch find_orthogonal_branch(const ForcingFamily& family, double lambda,
                                        double mu_lo, double mu_hi, const AxisVector& x0,
                                        const IntegratorConfig& cfg, double g_tol) {
  if (!(lambda >= 0.0)) throw DomainError("find_orthogonal_branch: lambda must be >= 0");
  if (!(mu_lo < mu_hi)) throw DomainError("find_orthogonal_branch: empty mu bracket");
  if (x0.norm() == 0.0) throw DomainError("find_orthogonal_branch: X0 must be nonzero");
  OrthogonalBranch out;
  if (lambda == 0.0) {
    out.converged = true;
    return out;
  }

  const AxisVector axis = x0.normalized();
  // Ball-model representative: continuous across orthogonality, unlike the
  // hemisphere-folded X.
  auto g = [&](double mu) {
    const ForcingSignal f = family(lambda, mu);
    const double T = f.period(lambda);
    const GroupTrajectory traj = integrate_group(f, lambda, T, cfg);
    ++out.evaluations;
    return traj.eval_class(T).representative().dot(axis) / T;
  };
  auto finish = [&](double mu, double gm, bool ok) {
    out.mu = mu;
    out.g = gm;
    out.converged = ok;
    return out;
  };

  double a = mu_lo;
  double b = mu_hi;
  double ga = g(a);
  if (std::abs(ga) < g_tol) return finish(a, ga, true);
  double gb = g(b);
  if (std::abs(gb) < g_tol) return finish(b, gb, true);
  if ((ga > 0.0) == (gb > 0.0)) {
    throw BracketError("find_orthogonal_branch: <X, X0> does not change sign on the bracket");
  }

  double best_mu = std::abs(ga) < std::abs(gb) ? a : b;
  double best_g = std::abs(ga) < std::abs(gb) ? ga : gb;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    double m = (a * gb - b * ga) / (gb - ga);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (!(m > lo && m < hi)) m = 0.5 * (a + b);
    const double gm = g(m);
    if (std::abs(gm) < std::abs(best_g)) {
      best_mu = m;
      best_g = gm;
    }
    if (std::abs(gm) < g_tol) return finish(m, gm, true);
    if ((gm > 0.0) != (gb > 0.0)) {
      a = b;
      ga = gb;
    } else {
      ga *= 0.5;
    }
    b = m;
    gb = gm;
    if (std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(m)) break;
  }
  return finish(best_mu, best_g, false);
}

}  // namespace spherewave
