#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spherewave/errors.hpp"
#include "spherewave/scenarios.hpp"
#include "support/oracles.hpp"

using namespace spherewave;

namespace {

std::vector<double> grid(double t_end, int n) {
  std::vector<double> ts;
  for (int i = 0; i <= n; ++i) ts.push_back(t_end * i / n);
  return ts;
}

}  // namespace

TEST(Scenarios, NamesAndDefaults) {
  EXPECT_EQ(scenario_names().size(), 8u);
  const Scenario c1 = build_scenario("case1");
  EXPECT_EQ(c1.params.omega_bif, 20.0);
  EXPECT_EQ(c1.params.x0_norm, 2.0);
  EXPECT_EQ(c1.params.k, 1);
  EXPECT_EQ(c1.x0(), AxisVector(0, 0, 2));
  EXPECT_NEAR(c1.period(0.05), 2 * std::numbers::pi / 20.05, 1e-15);
  EXPECT_NEAR(c1.params.tip_x0.norm(), 3.0, 1e-14);

  const Scenario c3 = build_scenario("case3");
  EXPECT_EQ(c3.params.theta0, 0.5);
  EXPECT_NEAR(c3.params.tip_x0.norm(), 3.0, 1e-14);
  EXPECT_TRUE(build_scenario("example4").uses_mu);
  EXPECT_FALSE(c3.uses_mu);
  EXPECT_EQ(build_scenario("example4", {.x0_norm = 40.0}).params.k, 2);
}

TEST(Scenarios, UnknownNameListsValidOnes) {
  try {
    build_scenario("case9");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("example4"), std::string::npos);
  }
}

TEST(Scenarios, RejectsBadOverrides) {
  Frame left;
  left.x2 = -left.x2;
  EXPECT_THROW(build_scenario("case1", {.basis = left}), ConfigError);
  Frame skewed;
  skewed.x1 = AxisVector(1, 0, 0.1).normalized();
  EXPECT_THROW(build_scenario("case1", {.basis = skewed}), ConfigError);
  EXPECT_THROW(build_scenario("case1", {.omega_bif = 0.0}), ConfigError);
  EXPECT_THROW(build_scenario("case1", {.r = -1.0}), ConfigError);
  EXPECT_THROW(build_scenario("case1", {.theta0 = 0.0}), ConfigError);
  EXPECT_THROW(build_scenario("case1", {.k = 0}), ConfigError);
  Modulation half;
  half.g = [](double t, double) { return t; };
  EXPECT_THROW(build_scenario("case1", {.modulation = half}), ConfigError);
}

TEST(Scenarios, NegativeLambdaIsRejected) {
  const Scenario s = build_scenario("example2");
  EXPECT_THROW(s.forcing_at(-0.1), DomainError);
  EXPECT_THROW(s.closed_form(0.0, -0.1, 0.0), DomainError);
}

TEST(Scenarios, ModulationVanishesAtZeroAndIsPeriodic) {
  for (auto name : scenario_names()) {
    const Scenario s = build_scenario(name);
    for (double lambda : {0.0, 0.01, 0.1}) {
      const double T = s.period(lambda);
      EXPECT_EQ(s.modulation.g(0.0, lambda), 0.0);
      EXPECT_NEAR(s.modulation.g(T, lambda), 0.0, 1e-13);
      const ForcingSignal f = s.forcing_at(lambda);
      for (double t : {0.013, 0.1, 0.27}) {
        EXPECT_LT((f.eval(t + T, lambda) - f.eval(t, lambda)).norm(), 1e-10) << name;
      }
    }
  }
}

TEST(Scenarios, ClosedFormsSolveTheGroupEquation) {
  // Ȧ = A·hat(X^G) checked with a finite-difference derivative.
  for (auto name : scenario_names()) {
    const Scenario s = build_scenario(name);
    for (double lambda : {0.0, 0.01, 0.09}) {
      const double mu = s.uses_mu ? 0.05 : 0.0;
      const ForcingSignal f = s.forcing(lambda, mu);
      auto A = [&](double t) { return s.closed_form(t, lambda, mu).matrix(); };
      for (double t : {0.05, 0.17, 0.4}) {
        const Eigen::Matrix3d lhs = oracle::derivative(A, t, 1e-3);
        const Eigen::Matrix3d rhs = A(t) * oracle::skew(f.eval(t, lambda));
        EXPECT_LT((lhs - rhs).norm(), 1e-8 * (1.0 + rhs.norm())) << name << " " << lambda;
      }
      EXPECT_LT(distance(s.closed_form(0.0, lambda, mu), Rotation::identity()), 1e-15);
    }
  }
}

TEST(Scenarios, LambdaZeroFrequencies) {
  // At λ = 0 every family reduces to the rotating wave e^{X0 t}.
  for (auto name : scenario_names()) {
    const Scenario s = build_scenario(name);
    for (double t : {0.1, 0.3}) {
      EXPECT_LT(distance(s.closed_form(t, 0.0, 0.0), exp_rot(s.x0() * t)), 1e-12) << name;
    }
  }
}

TEST(Scenarios, IntegrationMatchesClosedForms) {
  for (auto name : scenario_names()) {
    const Scenario s = build_scenario(name);
    for (double lambda : {0.01, 0.05}) {
      const double mu = s.uses_mu ? std::sqrt(lambda) : 0.0;
      const auto ts = grid(2 * s.period(lambda), 200);
      EXPECT_LT(verify_against_closed_form(s, lambda, mu, ts), 1e-7) << name << " " << lambda;
    }
  }
}

TEST(Scenarios, CustomFrameIsRespected) {
  oracle::Rng rng(5);
  const Eigen::Matrix3d R = rng.rotation();
  Frame f{R.col(2), R.col(0), R.col(1)};
  const Scenario s = build_scenario("case3", {.basis = f});
  const Scenario ref = build_scenario("case3");
  const double lambda = 0.04;
  for (double t : {0.1, 0.25}) {
    const Eigen::Matrix3d a = s.closed_form(t, lambda, 0.0).matrix();
    const Eigen::Matrix3d b = R * ref.closed_form(t, lambda, 0.0).matrix() * R.transpose();
    EXPECT_LT((a - b).norm(), 1e-12);
  }
  EXPECT_LT(verify_against_closed_form(s, lambda, 0.0, grid(s.period(lambda), 50)), 1e-7);
}

TEST(Scenarios, VerifyEdgeCases) {
  const Scenario s = build_scenario("case1");
  EXPECT_EQ(verify_against_closed_form(s, 0.01, 0.0, std::vector<double>{}), 0.0);
  EXPECT_EQ(verify_against_closed_form(s, 0.01, 0.0, std::vector<double>{0.0}), 0.0);
  EXPECT_THROW(verify_against_closed_form(s, 0.01, 0.0, std::vector<double>{-1.0, 0.2}),
               DomainError);
}
