// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "spherewave/bch.hpp"
#include "spherewave/errors.hpp"
#include "spherewave/flow.hpp"
#include "spherewave/hopf.hpp"
#include "spherewave/scenarios.hpp"
#include "spherewave/tip.hpp"
#include "support/oracles.hpp"

using namespace spherewave;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(const char* id, const char* title, bool ok, const std::string& detail) {
  std::printf("%-5s %s  %s  (%s)\n", id, ok ? "PASS" : "FAIL", title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

/// Runs a criterion, turning any exception into a FAIL line.
void criterion(const char* id, const char* title,
               const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  detail.precision(3);
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(id, title, ok, detail.str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> ts;
  for (int i = 0; i <= n; ++i) ts.push_back(t_end * i / n);
  return ts;
}

struct Frequency {
  GroupTrajectory traj;
  FrequencyReport report;
};

Frequency frequency(const Scenario& s, double lambda, double periods = 1.0) {
  const double T = s.period(lambda);
  GroupTrajectory traj = integrate_group(s.forcing_at(lambda), lambda, periods * T);
  const AxisVector X = primary_frequency(traj, T, s.basis.x01);
  return {std::move(traj), classify(lambda, s.x0(), s.params.omega_bif, X, T)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion("AC1", "BCH homomorphism on 1e4 random pairs", [](std::ostringstream& d) {
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Rng rng(2024);
    double worst = 0.0;
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
      const AxisVector x = rng.vector(0.0, 3 * kPi);
      const AxisVector y = rng.vector(0.0, 3 * kPi);
      const Rotation prod = exp_rot(x) * exp_rot(y);
      const BallClass c = bch(x, y);
      worst = std::max(worst, distance(exp_rot(c.representative()), prod));
      if (!approx_equal(c, log_rot(prod), 1e-9)) ++mismatches;
    }
    const double wall = seconds_since(t0);
    d << "max residual " << worst << " < 1e-10, class mismatches " << mismatches
      << ", wall " << wall << " s < 5 s";
    return worst < 1e-10 && mismatches == 0 && wall < 5.0;
  });

  criterion("AC2", "dexpinv * dexp = I on 1e3 samples", [](std::ostringstream& d) {
    oracle::Rng rng(2025);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double n = i < 100 ? rng.uniform(1e-8, 1e-3) : rng.uniform(1e-3, 2 * kPi - 0.1);
      const AxisVector z = rng.unit() * n;
      worst = std::max(worst, (dexpinv_op(z) * dexp_op(z) - Matrix3::Identity()).norm());
    }
    d << "max deviation " << worst << " < 1e-10 (100 samples below 1e-3)";
    return worst < 1e-10;
  });

  criterion("AC3", "closed forms of examples 1-5 over [0, 2T]", [](std::ostringstream& d) {
    const auto t0 = std::chrono::steady_clock::now();
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    double worst = 0.0;
    int runs = 0;
    for (const char* name : {"example1", "example2", "example3", "example5"}) {
      const Scenario s = build_scenario(name);
      for (double lambda : {0.01, 0.05, 0.1}) {
        worst = std::max(worst, verify_against_closed_form(s, lambda, 0.0,
                                                           grid(2 * s.period(lambda), 400), cfg));
        ++runs;
      }
    }
    const Scenario e4 = build_scenario("example4");
    for (double lambda : {0.01, 0.04, 0.09}) {
      for (double mu : {0.0, std::sqrt(lambda), 0.5}) {
        worst = std::max(worst, verify_against_closed_form(e4, lambda, mu,
                                                           grid(2 * e4.period(lambda), 400), cfg));
        ++runs;
      }
    }
    const double wall = seconds_since(t0);
    d << runs << " runs, max deviation " << worst << " < 1e-7, wall " << wall << " s < 30 s";
    return worst < 1e-7 && wall < 30.0;
  });

  criterion("AC4", "case 1 primary frequency X0 + sqrt(lambda) X1", [](std::ostringstream& d) {
    const Scenario s = build_scenario("case1");
    bool ok = true;
    for (double lambda : {0.01, 0.05}) {
      const FrequencyReport r = frequency(s, lambda).report;
      const AxisVector expected = s.x0() + std::sqrt(lambda) * s.basis.x1;
      const double err = (r.X - expected).cwiseAbs().maxCoeff();
      const bool labels = r.resonance.kind == ResonanceKind::NonResonant &&
                          r.motion == MotionKind::MeanderO1;
      d << "lambda " << lambda << ": err " << err << " " << to_string(r.resonance.kind) << "/"
        << to_string(r.motion) << "; ";
      ok = ok && err < 1e-6 && labels;
    }
    d << "tol 1e-6";
    return ok;
  });

  criterion("AC5", "case 2 resonant orthogonal drift", [](std::ostringstream& d) {
    const Scenario s = build_scenario("case2");
    bool ok = true;
    for (double lambda : {0.05, 0.1}) {
      const FrequencyReport r = frequency(s, lambda).report;
      const double c = r.ortho_defect ? std::abs(*r.ortho_defect) : 1.0;
      d << "lambda " << lambda << ": |<X^, X0^>| " << c << "; ";
      ok = ok && c < 1e-6;
    }
    d << "tol 1e-6";
    return ok;
  });

  criterion("AC6", "case 3 slow meander about X0", [](std::ostringstream& d) {
    const Scenario s = build_scenario("case3");
    const FrequencyReport r = frequency(s, 0.05).report;
    const double c = r.ortho_defect.value_or(0.0);
    d << to_string(r.resonance.kind) << "(" << r.resonance.k << ")/" << to_string(r.motion)
      << ", ortho_defect " << c << " > 0.1";
    return r.resonance.kind == ResonanceKind::Resonant && r.resonance.k == 1 &&
           r.motion == MotionKind::SlowMeanderAboutX0 && c > 0.1;
  });

  criterion("AC7", "period samples on a circle about X^(lambda)", [](std::ostringstream& d) {
    bool ok = true;
    for (const char* name : {"case1", "case2", "case3"}) {
      const Scenario s = build_scenario(name);
      const double lambda = 0.05;
      const Frequency f = frequency(s, lambda, 5.0);
      const std::vector<double> none;
      const TipTrack tr =
          tip_trajectory(f.traj, s.params.tip_x0, s.params.r, none, s.period(lambda));
      const CircleFit fit = fit_circle(tr.period_samples, f.report.X);
      const double axis_err = (fit.axis - f.report.X.normalized()).norm();
      d << name << ": " << tr.period_samples.size() << " pts rms " << fit.rms_residual
        << " axis err " << axis_err << "; ";
      ok = ok && tr.period_samples.size() == 6 && fit.rms_residual < 1e-6 * s.params.r &&
           axis_err < 1e-6;
    }
    d << "tol 1e-6*r";
    return ok;
  });

  criterion("AC8", "scaling laws between lambda = 1e-4 and 1e-2", [](std::ostringstream& d) {
    const Scenario c1 = build_scenario("case1");
    auto max_log_bf = [&](double lambda) {
      const Frequency f = frequency(c1, lambda);
      const PeriodicPart pp(f.traj, f.report.X, f.report.Xf);
      const double T = c1.period(lambda);
      double m = 0.0;
      for (int i = 0; i <= 400; ++i) m = std::max(m, pp.log_Bf(T * i / 400.0).norm());
      return m;
    };
    const double ratio = max_log_bf(1e-2) / max_log_bf(1e-4);
    const bool nonres = std::abs(ratio - 10.0) <= 2.5;

    const Scenario c2 = build_scenario("case2");
    auto dev = [&](double lambda) {
      return std::abs(frequency(c2, lambda).report.Xf.norm() - c2.x0().norm());
    };
    const double res_ratio = dev(1e-2) / dev(1e-4);
    const double bound = std::pow(100.0, 0.25) / 2.0;
    d << "nonresonant max|log Bf| ratio " << ratio << " in [7.5, 12.5]; resonant ||Xf|-|X0|| ratio "
      << res_ratio << " >= " << bound;
    return nonres && res_ratio >= bound;
  });

  criterion("AC9", "orthogonal branch finder on example 4", [](std::ostringstream& d) {
    const Scenario s = build_scenario("example4");
    bool ok = true;
    for (double lambda : {1e-4, 1e-2}) {
      const OrthogonalBranch b = find_orthogonal_branch(s.forcing, lambda, 0.0, 0.3, s.x0());
      const double err = std::abs(b.mu - std::sqrt(lambda));
      d << "lambda " << lambda << ": |mu*-sqrt(lambda)| " << err << " |g| " << std::abs(b.g)
        << "; ";
      ok = ok && b.converged && err < 1e-6 && std::abs(b.g) < 1e-10;
    }
    bool bracket = false;
    try {
      const Scenario flat = build_scenario("case3");
      find_orthogonal_branch(flat.forcing, 1e-2, 0.0, 0.3, flat.x0());
    } catch (const BracketError&) {
      bracket = true;
    }
    d << "degenerate family BracketError " << (bracket ? "raised" : "missing");
    return ok && bracket;
  });

  criterion("AC10", "Euler angles vs Z formulation on case 3", [](std::ostringstream& d) {
    const Scenario s = build_scenario("case3");
    const double lambda = 0.05;
    const double t_end = 5 * s.period(lambda);
    const EulerTrajectory e = integrate_euler(s.forcing_at(lambda), lambda, t_end, 0.5);
    const GroupTrajectory g = integrate_group(s.forcing_at(lambda), lambda, t_end);
    double worst = 0.0;
    for (double t : grid(t_end, 1000)) worst = std::max(worst, distance(e.eval_A(t), g.eval_A(t)));
    bool gimbal = false;
    try {
      integrate_euler(s.forcing_at(lambda), lambda, t_end, 0.0);
    } catch (const GimbalLockError&) {
      gimbal = true;
    }
    d << "max deviation " << worst << " < 1e-6, theta0 = 0 GimbalLockError "
      << (gimbal ? "raised" : "missing");
    return worst < 1e-6 && gimbal;
  });

  criterion("AC11", "byte-identical repeated runs", [](std::ostringstream& d) {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "spherewave_acceptance";
    fs::remove_all(root);
    cli::RunConfig cfg;
    cfg.scenario = "case3";
    cfg.lambda_grid = {0.01, 0.05};
    std::vector<std::string> texts;
    for (const char* run : {"a", "b"}) {
      cfg.out = (root / run).string();
      const auto files = cli::cmd_simulate(cfg);
      std::string all;
      for (const auto& f : files) all += slurp(f);
      texts.push_back(all + cli::cmd_frequency(cfg).dump());
    }
    fs::remove_all(root);
    d << texts[0].size() << " bytes per run";
    return !texts[0].empty() && texts[0] == texts[1];
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
