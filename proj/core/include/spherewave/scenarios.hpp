#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "spherewave/flow.hpp"
#include "spherewave/so3.hpp"

namespace spherewave {

/// Right-handed orthonormal frame (X0¹, X1, X2) with X0¹ × X1 = X2.
struct Frame {
  AxisVector x01 = AxisVector::UnitZ();
  AxisVector x1 = AxisVector::UnitX();
  AxisVector x2 = AxisVector::UnitY();
};

/// Scalar modulation g(t, λ) with g(0, λ) = 0 and its time derivative.
struct Modulation {
  std::function<double(double t, double lambda)> g;
  std::function<double(double t, double lambda)> g_dot;
};

struct ScenarioParams {
  double omega_bif = 20.0;
  double x0_norm = 20.0;
  double r = 3.0;
  double theta0 = 0.02;
  double mu = 0.0;
  /// Resonance order used by example4 (ε^k and the k in its c factor).
  int k = 1;
  /// Reference tip point, on the sphere of radius r.
  Eigen::Vector3d tip_x0 = Eigen::Vector3d(0.0, 0.92, 2.85);
};

struct ScenarioOverrides {
  std::optional<double> omega_bif;
  std::optional<double> x0_norm;
  std::optional<double> r;
  std::optional<double> theta0;
  std::optional<double> mu;
  std::optional<int> k;
  std::optional<Eigen::Vector3d> tip_x0;
  std::optional<Frame> basis;
  std::optional<Modulation> modulation;
};

struct Scenario {
  std::string name;
  Frame basis;
  ScenarioParams params;
  Modulation modulation;
  /// True for families that depend on the second parameter μ.
  bool uses_mu = false;

  std::function<ForcingSignal(double lambda, double mu)> forcing;
  /// Exact solution A(t, λ, μ) with A(0) = I.
  std::function<Rotation(double t, double lambda, double mu)> closed_form;

  AxisVector x0() const { return params.x0_norm * basis.x01; }
  double omega_lambda(double lambda) const { return params.omega_bif + lambda; }
  double period(double lambda) const;
  ForcingSignal forcing_at(double lambda) const { return forcing(lambda, params.mu); }
};

/// example1 … example5, case1, case2, case3.
std::span<const std::string_view> scenario_names();

/// Throws ConfigError for unknown names and invalid overrides.
Scenario build_scenario(std::string_view name, const ScenarioOverrides& overrides = {});

/// max over t_grid of ‖A_integrated(t) − A_closed(t)‖_F.
double verify_against_closed_form(const Scenario& s, double lambda, double mu,
                                  std::span<const double> t_grid,
                                  const IntegratorConfig& cfg = {});

}  // namespace spherewave
