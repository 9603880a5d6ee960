#include "spherewave/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "spherewave/errors.hpp"

namespace spherewave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array<std::string_view, 8> kNames = {
    "example1", "example2", "example3", "example4",
    "example5", "case1",    "case2",    "case3",
};

enum class Family { Example1, Example2, Example3, Example4, Example5 };

void check_frame(const Frame& f) {
  const double tol = 1e-12;
  const bool unit = std::abs(f.x01.norm() - 1.0) < tol && std::abs(f.x1.norm() - 1.0) < tol &&
                    std::abs(f.x2.norm() - 1.0) < tol;
  if (!unit || std::abs(f.x01.dot(f.x1)) > tol || (f.x01.cross(f.x1) - f.x2).norm() > tol) {
    throw ConfigError("scenario basis must be orthonormal and right-handed (X01 x X1 = X2)");
  }
}

void check_params(const ScenarioParams& p) {
  if (!(std::isfinite(p.omega_bif) && p.omega_bif != 0.0)) {
    throw ConfigError("omega_bif must be finite and nonzero");
  }
  if (!(p.x0_norm > 0.0 && std::isfinite(p.x0_norm))) throw ConfigError("x0_norm must be positive");
  if (!(p.r > 0.0 && std::isfinite(p.r))) throw ConfigError("r must be positive");
  if (!(p.theta0 > 0.0 && p.theta0 < std::numbers::pi)) {
    throw ConfigError("theta0 must lie in (0, pi)");
  }
  if (!std::isfinite(p.mu)) throw ConfigError("mu must be finite");
  if (p.k < 1) throw ConfigError("k must be >= 1");
  if (!(p.tip_x0.allFinite() && p.tip_x0.norm() > 0.0)) {
    throw ConfigError("tip point must be finite and nonzero");
  }
}

double checked_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("scenario: lambda must be >= 0");
  return lambda;
}

void wire(Scenario& s, Family family) {
  const Frame b = s.basis;
  const ScenarioParams p = s.params;
  const Modulation m = s.modulation;
  const AxisVector x0 = p.x0_norm * b.x01;
  const double omega = p.omega_bif;
  auto period = [omega](double lambda) { return kTwoPi / std::abs(omega + lambda); };

  auto make_signal = [=](std::function<AxisVector(double, double)> eval) {
    ForcingSignal f;
    f.eval = std::move(eval);
    f.period = period;
    f.ref_dir = b.x01;
    return f;
  };

  switch (family) {
    case Family::Example1: {
      // A = e^{Mt} e^{Pg}, M = X0 + εX1, P = 2ε(X1 + X2 + X0¹).
      s.forcing = [=](double lambda, double) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector P = 2.0 * eps * (b.x1 + b.x2 + b.x01);
        const AxisVector M = x0 + eps * b.x1;
        return make_signal([=](double t, double l) -> AxisVector {
          return P * m.g_dot(t, l) + exp_rot(-P * m.g(t, l)) * M;
        });
      };
      s.closed_form = [=](double t, double lambda, double) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector P = 2.0 * eps * (b.x1 + b.x2 + b.x01);
        return exp_rot((x0 + eps * b.x1) * t) * exp_rot(P * m.g(t, lambda));
      };
      break;
    }
    case Family::Example2:
    case Family::Example3: {
      // A = e^{εVt} e^{Nφ}, N = X0 + εX2, φ = ct + λg.
      const bool shifted = family == Family::Example3;
      auto drift = [=](double eps) -> AxisVector {
        return shifted ? AxisVector(eps * (x0 + b.x1)) : AxisVector(eps * b.x1);
      };
      auto c_of = [=](double lambda) {
        return std::abs(omega + lambda) / std::sqrt(p.x0_norm * p.x0_norm + lambda);
      };
      s.forcing = [=](double lambda, double) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector N = x0 + eps * b.x2;
        const AxisVector V = drift(eps);
        const double c = c_of(lambda);
        return make_signal([=](double t, double l) -> AxisVector {
          const double phi = c * t + l * m.g(t, l);
          const double phi_dot = c + l * m.g_dot(t, l);
          return N * phi_dot + exp_rot(-N * phi) * V;
        });
      };
      s.closed_form = [=](double t, double lambda, double) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector N = x0 + eps * b.x2;
        const double phi = c_of(lambda) * t + lambda * m.g(t, lambda);
        return exp_rot(drift(eps) * t) * exp_rot(N * phi);
      };
      break;
    }
    case Family::Example4: {
      // A = e^{ε^k W t} e^{Nφ}, N = X0 + μX1, W = (ε − μ)X0 + X1 + X2.
      const int k = p.k;
      auto c_of = [=](double lambda, double mu) {
        return k * std::abs(omega + lambda) / std::sqrt(p.x0_norm * p.x0_norm + mu * mu);
      };
      s.forcing = [=](double lambda, double mu) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector N = x0 + mu * b.x1;
        const AxisVector W = std::pow(eps, k) * ((eps - mu) * x0 + b.x1 + b.x2);
        const double c = c_of(lambda, mu);
        return make_signal([=](double t, double l) -> AxisVector {
          const double phi = c * t + l * m.g(t, l);
          const double phi_dot = c + l * m.g_dot(t, l);
          return N * phi_dot + exp_rot(-N * phi) * W;
        });
      };
      s.closed_form = [=](double t, double lambda, double mu) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector N = x0 + mu * b.x1;
        const AxisVector W = std::pow(eps, k) * ((eps - mu) * x0 + b.x1 + b.x2);
        const double phi = c_of(lambda, mu) * t + lambda * m.g(t, lambda);
        return exp_rot(W * t) * exp_rot(N * phi);
      };
      break;
    }
    case Family::Example5: {
      // A = e^{(X0 + εX1)(t + εg)}.
      s.forcing = [=](double lambda, double) {
        const double eps = std::sqrt(checked_lambda(lambda));
        const AxisVector V = x0 + eps * b.x1;
        return make_signal([=](double t, double l) -> AxisVector {
          return V * (1.0 + eps * m.g_dot(t, l));
        });
      };
      s.closed_form = [=](double t, double lambda, double) {
        const double eps = std::sqrt(checked_lambda(lambda));
        return exp_rot((x0 + eps * b.x1) * (t + eps * m.g(t, lambda)));
      };
      break;
    }
  }
}

}  // namespace

double Scenario::period(double lambda) const {
  return kTwoPi / std::abs(omega_lambda(lambda));
}

std::span<const std::string_view> scenario_names() { return kNames; }

Scenario build_scenario(std::string_view name, const ScenarioOverrides& o) {
  Scenario s;
  s.name = std::string(name);
  ScenarioParams& p = s.params;
  Family family = Family::Example1;

  if (name == "example1" || name == "case1") {
    family = Family::Example1;
    p.omega_bif = 20.0;
    p.x0_norm = 2.0;
    p.theta0 = 0.01;
  } else if (name == "example2" || name == "case2") {
    family = Family::Example2;
  } else if (name == "example3" || name == "case3") {
    family = Family::Example3;
    if (name == "case3") {
      p.theta0 = 0.5;
      p.tip_x0 = Eigen::Vector3d(0.44, 0.14, 2.96);
    }
  } else if (name == "example4") {
    family = Family::Example4;
    s.uses_mu = true;
  } else if (name == "example5") {
    family = Family::Example5;
  } else {
    std::string msg = "unknown scenario '" + std::string(name) + "'; valid names:";
    for (auto n : kNames) msg += " " + std::string(n);
    throw ConfigError(msg);
  }

  if (o.omega_bif) p.omega_bif = *o.omega_bif;
  if (o.x0_norm) p.x0_norm = *o.x0_norm;
  if (o.r) p.r = *o.r;
  if (o.theta0) p.theta0 = *o.theta0;
  if (o.mu) p.mu = *o.mu;
  if (o.tip_x0) p.tip_x0 = *o.tip_x0;
  if (p.omega_bif != 0.0) {
    p.k = std::max(1, static_cast<int>(std::lround(p.x0_norm / std::abs(p.omega_bif))));
  }
  if (o.k) p.k = *o.k;
  if (o.basis) s.basis = *o.basis;
  check_params(p);
  check_frame(s.basis);
  p.tip_x0 = p.r * p.tip_x0.normalized();

  if (o.modulation) {
    if (!o.modulation->g || !o.modulation->g_dot) {
      throw ConfigError("modulation override needs both g and g_dot");
    }
    s.modulation = *o.modulation;
  } else {
    const double omega = p.omega_bif;
    s.modulation.g = [omega](double t, double lambda) { return std::sin((omega + lambda) * t); };
    s.modulation.g_dot = [omega](double t, double lambda) {
      return (omega + lambda) * std::cos((omega + lambda) * t);
    };
  }

  wire(s, family);
  return s;
}

double verify_against_closed_form(const Scenario& s, double lambda, double mu,
                                  std::span<const double> t_grid, const IntegratorConfig& cfg) {
  if (!s.closed_form) throw DomainError("verify_against_closed_form: scenario has no closed form");
  if (t_grid.empty()) return 0.0;
  double t_max = 0.0;
  for (double t : t_grid) {
    if (t < 0.0) throw DomainError("verify_against_closed_form: negative time in grid");
    t_max = std::max(t_max, t);
  }
  if (t_max == 0.0) return 0.0;
  const GroupTrajectory traj = integrate_group(s.forcing(lambda, mu), lambda, t_max, cfg);
  double worst = 0.0;
  for (double t : t_grid) {
    worst = std::max(worst, distance(traj.eval_A(t), s.closed_form(t, lambda, mu)));
  }
  return worst;
}

}  // namespace spherewave
