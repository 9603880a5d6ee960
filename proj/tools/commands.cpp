#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "format.hpp"
#include "spherewave/bch.hpp"
#include "spherewave/errors.hpp"
#include "spherewave/hopf.hpp"
#include "spherewave/tip.hpp"

namespace spherewave::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kVerifyTol = 1e-7;

ojson vec_json(const Eigen::Vector3d& v) { return ojson::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec_from(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string("config: '") + key + "' must be an array of 3 numbers");
  }
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) {
      throw ConfigError(std::string("config: '") + key + "' must be an array of 3 numbers");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

double num_from(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return j.get<double>();
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> keys,
                    const char* where) {
  if (!j.is_object()) throw ConfigError(std::string("config: ") + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError(std::string("config: unknown key '") + it.key() + "' in " + where);
    }
  }
}

std::string file_token(double v) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc{} ? std::string(buf.data(), end) : std::string("nan");
}

double effective_mu(const RunConfig& cfg, const Scenario& s) {
  return cfg.mu.value_or(s.params.mu);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void emit(const ojson& j, const RunConfig& cfg, std::ostream& out) {
  const std::string text = dump_json(j);
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream os = open_output(cfg.out);
  os << text;
  if (!os) throw IoError("failed writing '" + cfg.out + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (lambda_grid.empty()) throw ConfigError("lambda grid is empty");
  for (double l : lambda_grid) {
    if (!(l >= 0.0 && std::isfinite(l))) throw ConfigError("lambda values must be finite and >= 0");
  }
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw ConfigError("lambda grid must be sorted ascending");
  }
  if (!(horizon >= 1.0 && std::isfinite(horizon))) throw ConfigError("horizon must be >= 1");
  if (samples_per_period < 1) throw ConfigError("samples-per-period must be >= 1");
  if (mu && !std::isfinite(*mu)) throw ConfigError("mu must be finite");
  if (!(mu_bracket[0] < mu_bracket[1])) throw ConfigError("mu bracket must satisfy lo < hi");
  integrator.validate();
  build_scenario(scenario, overrides);
}

ojson to_json(const RunConfig& cfg) {
  ojson j;
  j["scenario"] = cfg.scenario;
  j["lambda_grid"] = cfg.lambda_grid;
  j["mu"] = cfg.mu ? ojson(*cfg.mu) : ojson(nullptr);
  j["mu_bracket"] = ojson::array({cfg.mu_bracket[0], cfg.mu_bracket[1]});
  j["horizon"] = cfg.horizon;
  j["samples_per_period"] = cfg.samples_per_period;
  ojson integ;
  integ["rtol"] = cfg.integrator.rtol;
  integ["atol"] = cfg.integrator.atol;
  integ["restart_margin"] = cfg.integrator.restart_margin;
  integ["max_step"] =
      std::isfinite(cfg.integrator.max_step) ? ojson(cfg.integrator.max_step) : ojson(nullptr);
  integ["method_order"] = cfg.integrator.method_order;
  j["integrator"] = integ;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;

  const Scenario s = build_scenario(cfg.scenario, cfg.overrides);
  ojson ov;
  ov["omega_bif"] = s.params.omega_bif;
  ov["x0_norm"] = s.params.x0_norm;
  ov["r"] = s.params.r;
  ov["theta0"] = s.params.theta0;
  ov["k"] = s.params.k;
  ov["tip_x0"] = vec_json(s.params.tip_x0);
  ov["basis"] = ojson{{"x01", vec_json(s.basis.x01)},
                      {"x1", vec_json(s.basis.x1)},
                      {"x2", vec_json(s.basis.x2)}};
  j["overrides"] = ov;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig cfg) {
  reject_unknown(j,
                 {"scenario", "lambda_grid", "mu", "mu_bracket", "horizon", "samples_per_period",
                  "integrator", "out", "seed", "overrides"},
                 "config");
  try {
    if (j.contains("scenario")) cfg.scenario = j.at("scenario").get<std::string>();
    if (j.contains("lambda_grid")) {
      cfg.lambda_grid.clear();
      for (const auto& v : j.at("lambda_grid")) cfg.lambda_grid.push_back(num_from(v, "lambda_grid"));
    }
    if (j.contains("mu")) {
      cfg.mu = j.at("mu").is_null() ? std::nullopt : std::optional(num_from(j.at("mu"), "mu"));
    }
    if (j.contains("mu_bracket")) {
      const auto& b = j.at("mu_bracket");
      if (!b.is_array() || b.size() != 2) throw ConfigError("config: 'mu_bracket' needs 2 numbers");
      cfg.mu_bracket = {num_from(b[0], "mu_bracket"), num_from(b[1], "mu_bracket")};
    }
    if (j.contains("horizon")) cfg.horizon = num_from(j.at("horizon"), "horizon");
    if (j.contains("samples_per_period")) {
      cfg.samples_per_period = j.at("samples_per_period").get<int>();
    }
    if (j.contains("integrator")) {
      const auto& ij = j.at("integrator");
      reject_unknown(ij, {"rtol", "atol", "restart_margin", "max_step", "method_order"},
                     "integrator");
      if (ij.contains("rtol")) cfg.integrator.rtol = num_from(ij.at("rtol"), "rtol");
      if (ij.contains("atol")) cfg.integrator.atol = num_from(ij.at("atol"), "atol");
      if (ij.contains("restart_margin")) {
        cfg.integrator.restart_margin = num_from(ij.at("restart_margin"), "restart_margin");
      }
      if (ij.contains("max_step")) {
        cfg.integrator.max_step = ij.at("max_step").is_null()
                                      ? std::numeric_limits<double>::infinity()
                                      : num_from(ij.at("max_step"), "max_step");
      }
      if (ij.contains("method_order")) cfg.integrator.method_order = ij.at("method_order").get<int>();
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("overrides")) {
      const auto& o = j.at("overrides");
      reject_unknown(o, {"omega_bif", "x0_norm", "r", "theta0", "k", "tip_x0", "basis"},
                     "overrides");
      ScenarioOverrides& ov = cfg.overrides;
      if (o.contains("omega_bif")) ov.omega_bif = num_from(o.at("omega_bif"), "omega_bif");
      if (o.contains("x0_norm")) ov.x0_norm = num_from(o.at("x0_norm"), "x0_norm");
      if (o.contains("r")) ov.r = num_from(o.at("r"), "r");
      if (o.contains("theta0")) ov.theta0 = num_from(o.at("theta0"), "theta0");
      if (o.contains("k")) ov.k = o.at("k").get<int>();
      if (o.contains("tip_x0")) ov.tip_x0 = vec_from(o.at("tip_x0"), "tip_x0");
      if (o.contains("basis")) {
        const auto& b = o.at("basis");
        reject_unknown(b, {"x01", "x1", "x2"}, "basis");
        Frame f;
        if (b.contains("x01")) f.x01 = vec_from(b.at("x01"), "x01");
        if (b.contains("x1")) f.x1 = vec_from(b.at("x1"), "x1");
        if (b.contains("x2")) f.x2 = vec_from(b.at("x2"), "x2");
        ov.basis = f;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  const Scenario s = build_scenario(cfg.scenario, cfg.overrides);
  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }

  const auto rows = static_cast<long>(std::floor(cfg.horizon * cfg.samples_per_period + 1e-9));
  std::vector<std::filesystem::path> written;
  for (double lambda : cfg.lambda_grid) {
    const double T = s.period(lambda);
    const double dt = T / cfg.samples_per_period;
    const GroupTrajectory traj = integrate_group(s.forcing(lambda, effective_mu(cfg, s)), lambda,
                                                 static_cast<double>(rows) * dt, cfg.integrator);

    std::string text = "t,a11,a12,a13,a21,a22,a23,a31,a32,a33,tipx,tipy,tipz\n";
    for (long i = 0; i <= rows; ++i) {
      const double t = static_cast<double>(i) * dt;
      const Rotation A = traj.eval_A(t);
      const Eigen::Vector3d tip = A * s.params.tip_x0;
      text += format_double(t);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) text += "," + format_double(A.matrix()(r, c));
      }
      for (int k = 0; k < 3; ++k) text += "," + format_double(tip[k]);
      text += "\n";
    }

    const std::filesystem::path path = dir / (s.name + "_lambda_" + file_token(lambda) + ".csv");
    std::ofstream os = open_output(path);
    os << text;
    if (!os) throw IoError("failed writing '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

ojson cmd_frequency(const RunConfig& cfg) {
  cfg.validate();
  const Scenario s = build_scenario(cfg.scenario, cfg.overrides);
  const auto periods = static_cast<int>(std::floor(cfg.horizon + 1e-9));
  ojson report = ojson::array();
  for (double lambda : cfg.lambda_grid) {
    const double T = s.period(lambda);
    const GroupTrajectory traj = integrate_group(s.forcing(lambda, effective_mu(cfg, s)), lambda,
                                                 periods * T, cfg.integrator);
    const AxisVector X = primary_frequency(traj, T, s.basis.x01);
    const FrequencyReport r = classify(lambda, s.x0(), s.params.omega_bif, X, T);

    ojson row;
    row["lambda"] = lambda;
    row["X"] = vec_json(r.X);
    row["Xf"] = vec_json(r.Xf);
    row["norm_X"] = r.X.norm();
    row["norm_Xf"] = r.Xf.norm();
    row["resonance"] = ojson{{"kind", std::string(to_string(r.resonance.kind))},
                             {"k", r.resonance.k}};
    row["ortho_defect"] = r.ortho_defect ? ojson(*r.ortho_defect) : ojson(nullptr);
    row["motion"] = std::string(to_string(r.motion));

    const TipTrack track = tip_trajectory(traj, s.params.tip_x0, s.params.r, {}, T);
    try {
      const AxisVector ref = X.norm() > 0.0 ? X : s.basis.x01;
      const CircleFit fit = fit_circle(track.period_samples, ref);
      row["circle_fit"] = ojson{{"axis", vec_json(fit.axis)},
                                {"radius", fit.radius},
                                {"rms", fit.rms_residual}};
    } catch (const FitError&) {
      row["circle_fit"] = nullptr;
    }
    report.push_back(std::move(row));
  }
  return report;
}

ojson cmd_drift(const RunConfig& cfg) {
  cfg.validate();
  const Scenario s = build_scenario(cfg.scenario, cfg.overrides);
  ojson report = ojson::array();
  for (double lambda : cfg.lambda_grid) {
    const OrthogonalBranch br = find_orthogonal_branch(
        s.forcing, lambda, cfg.mu_bracket[0], cfg.mu_bracket[1], s.x0(), cfg.integrator);
    const double T = s.period(lambda);
    const GroupTrajectory traj = integrate_group(s.forcing(lambda, br.mu), lambda, T,
                                                 cfg.integrator);
    const AxisVector X = primary_frequency(traj, T, s.basis.x01);
    ojson row;
    row["lambda"] = lambda;
    row["mu_star"] = br.mu;
    row["ortho_defect"] = X.norm() > 0.0 ? ojson(X.normalized().dot(s.basis.x01)) : ojson(nullptr);
    row["g"] = br.g;
    row["converged"] = br.converged;
    report.push_back(std::move(row));
  }
  return report;
}

ojson cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  const Scenario s = build_scenario(cfg.scenario, cfg.overrides);
  const auto n = static_cast<long>(std::floor(cfg.horizon * cfg.samples_per_period + 1e-9));
  ojson report = ojson::array();
  for (double lambda : cfg.lambda_grid) {
    const double T = s.period(lambda);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) * T / cfg.samples_per_period);
    const double mu = effective_mu(cfg, s);
    const double dev = verify_against_closed_form(s, lambda, mu, grid, cfg.integrator);
    ojson row;
    row["lambda"] = lambda;
    row["mu"] = mu;
    row["max_deviation"] = dev;
    row["pass"] = dev < kVerifyTol;
    report.push_back(std::move(row));
  }
  return report;
}

std::string cmd_bch(const AxisVector& x, const AxisVector& y, bool check) {
  const BchBreakdown b = bch_breakdown(x, y);
  const AxisVector& v = b.result.representative();
  const AngleAxis aa = to_angle_axis(b.result);
  std::ostringstream os;
  auto vec = [](const AxisVector& u) {
    return format_double(u.x()) + " " + format_double(u.y()) + " " + format_double(u.z());
  };
  os << "result: " << vec(v) << "\n";
  os << "angle: " << format_double(aa.angle) << "\n";
  os << "axis: " << vec(aa.axis) << "\n";
  os << "branch: " << to_string(b.branch) << (b.fallback ? " (log fallback)" : "") << "\n";
  os << "alpha: " << format_double(b.alpha) << "\n";
  os << "beta: " << format_double(b.beta) << "\n";
  os << "gamma: " << format_double(b.gamma) << "\n";
  os << "e: " << format_double(b.e) << "\n";
  os << "a1: " << format_double(b.a1) << "\n";
  os << "b1: " << format_double(b.b1) << "\n";
  os << "c1: " << format_double(b.c1) << "\n";
  os << "d1: " << format_double(b.d1) << "\n";
  os << "d: " << format_double(b.d) << "\n";
  os << "s: " << format_double(b.s) << "\n";
  if (check) {
    const double res = distance(exp_rot(v), exp_rot(x) * exp_rot(y));
    os << "check: " << format_double(res) << "\n";
  }
  return os.str();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"spherewave: rotating and modulated rotating waves on the sphere"};
  app.name("spherewave");
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::string> scenario;
  std::optional<double> lambda;
  std::vector<double> lambda_grid;
  std::optional<double> mu;
  std::vector<double> mu_bracket;
  std::optional<double> horizon;
  std::optional<int> samples;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<double> restart_margin;
  std::optional<std::string> out_path;
  bool dump_config = false;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration; flags override it");
    sub->add_option("--scenario", scenario, "example1..example5, case1..case3");
    sub->add_option("--lambda", lambda, "single bifurcation parameter value");
    sub->add_option("--lambda-grid", lambda_grid, "comma-separated ascending lambda values")
        ->delimiter(',');
    sub->add_option("--mu", mu, "second parameter of two-parameter families");
    sub->add_option("--mu-bracket", mu_bracket, "root bracket lo,hi for drift")
        ->delimiter(',')
        ->expected(2);
    sub->add_option("--horizon", horizon, "time horizon in relative periods");
    sub->add_option("--samples-per-period", samples, "output samples per period");
    sub->add_option("--rtol", rtol, "integrator relative tolerance");
    sub->add_option("--atol", atol, "integrator absolute tolerance");
    sub->add_option("--restart-margin", restart_margin, "segment restart margin below pi");
    sub->add_option("--out", out_path, "output file (directory for simulate)");
    sub->add_flag("--dump-config", dump_config, "print the effective configuration and exit");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "write A(t) and tip trajectories as CSV");
  CLI::App* frequency = app.add_subcommand("frequency", "primary frequency report as JSON");
  CLI::App* drift = app.add_subcommand("drift", "orthogonal resonant-drift branch mu*(lambda)");
  CLI::App* verify = app.add_subcommand("verify", "compare integration with the closed form");
  for (CLI::App* sub : {simulate, frequency, drift, verify}) add_run_options(sub);

  CLI::App* bch_cmd = app.add_subcommand("bch", "closed-form BCH composition of two axis vectors");
  std::vector<double> bx;
  std::vector<double> by;
  bool check = false;
  bch_cmd->add_option("--x", bx, "first axis vector")->expected(3)->required();
  bch_cmd->add_option("--y", by, "second axis vector")->expected(3)->required();
  bch_cmd->add_flag("--check", check, "also print ||e^BCH - e^X e^Y||_F");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run 'spherewave --help' for usage\n";
    return kConfigError;
  }

  try {
    if (bch_cmd->parsed()) {
      out << cmd_bch(AxisVector(bx[0], bx[1], bx[2]), AxisVector(by[0], by[1], by[2]), check);
      return kOk;
    }

    RunConfig cfg = config_path ? load_config(*config_path) : RunConfig{};
    if (scenario) cfg.scenario = *scenario;
    if (lambda && !lambda_grid.empty()) {
      throw ConfigError("use either --lambda or --lambda-grid, not both");
    }
    if (lambda) cfg.lambda_grid = {*lambda};
    if (!lambda_grid.empty()) cfg.lambda_grid = lambda_grid;
    if (mu) cfg.mu = *mu;
    if (!mu_bracket.empty()) cfg.mu_bracket = {mu_bracket[0], mu_bracket[1]};
    if (horizon) cfg.horizon = *horizon;
    if (samples) cfg.samples_per_period = *samples;
    if (rtol) cfg.integrator.rtol = *rtol;
    if (atol) cfg.integrator.atol = *atol;
    if (restart_margin) cfg.integrator.restart_margin = *restart_margin;
    if (out_path) cfg.out = *out_path;
    cfg.validate();

    if (dump_config) {
      out << dump_json(to_json(cfg));
      return kOk;
    }
    if (simulate->parsed()) {
      for (const auto& p : cmd_simulate(cfg)) out << p.string() << "\n";
      return kOk;
    }
    if (frequency->parsed()) {
      emit(cmd_frequency(cfg), cfg, out);
      return kOk;
    }
    if (drift->parsed()) {
      const ojson report = cmd_drift(cfg);
      emit(report, cfg, out);
      for (const auto& row : report) {
        if (!row["converged"].get<bool>()) {
          err << "error: root finder did not reach |g| < 1e-10\n";
          return kNumericalError;
        }
      }
      return kOk;
    }
    const ojson report = cmd_verify(cfg);
    emit(report, cfg, out);
    for (const auto& row : report) {
      if (!row["pass"].get<bool>()) {
        err << "error: deviation from the closed form exceeds 1e-7\n";
        return kNumericalError;
      }
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace spherewave::cli
