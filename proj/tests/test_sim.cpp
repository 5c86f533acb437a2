#include "sdac/simulation.hpp"

#include "sdac/io.hpp"
#include "sdac/reference.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace sdac;

namespace {

ScenarioConfig trim_hold_config(double duration) {
  ScenarioConfig cfg;
  cfg.reference.type = ReferenceSpec::Type::trim_hold;
  cfg.mode = ControlMode::smc_only;
  cfg.t_on = 2.0;
  cfg.duration = duration;
  cfg.uncertainty = UncertaintySpec{};
  cfg.dither.enable = false;
  return cfg;
}

bool nan_aware_equal(double a, double b) {
  return (a == b) || (std::isnan(a) && std::isnan(b));
}

}  // namespace

TEST_CASE("rk4_step leaves the state alone for a zero derivative") {
  auto f = [](double, const Vec6&) { return Vec6::Zero().eval(); };
  Vec6 x;
  x << 1, -2, 3, 0.5, 0.25, -0.125;
  const Vec6 y = rk4_step(f, x, 0.0, 0.1);
  REQUIRE((y - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rk4_step matches the analytic exponential to fifth order") {
  auto f = [](double, double x) { return -x; };
  const double y = rk4_step(f, 1.0, 0.0, 0.1);
  REQUIRE(std::abs(y - std::exp(-0.1)) < 1e-7);
}

TEST_CASE("rk4_step global error contracts fourth order on a linear system") {
  // undamped oscillator xddot = -omega^2 x with known solution
  const double w = 3.0;
  auto f = [&](double, const Eigen::Vector2d& x) {
    return Eigen::Vector2d(x(1), -w * w * x(0));
  };
  auto global_error = [&](double dt) {
    Eigen::Vector2d x(1.0, 0.0);
    const int n = static_cast<int>(std::round(1.0 / dt));
    for (int k = 0; k < n; ++k) x = rk4_step(f, x, k * dt, dt);
    const Eigen::Vector2d exact(std::cos(w), -w * std::sin(w));
    return (x - exact).norm();
  };
  const double e1 = global_error(0.02);
  const double e2 = global_error(0.01);
  const double e3 = global_error(0.005);
  REQUIRE(e1 / e2 == Catch::Approx(16.0).margin(3.0));
  REQUIRE(e2 / e3 == Catch::Approx(16.0).margin(3.0));
}

TEST_CASE("rk4_step rejects invalid steps and non-finite derivatives") {
  auto ok = [](double, double x) { return -x; };
  REQUIRE_THROWS_AS(rk4_step(ok, 1.0, 0.0, 0.0), ParameterError);
  auto bad = [](double, double) { return std::nan(""); };
  REQUIRE_THROWS_AS(rk4_step(bad, 1.0, 0.0, 0.1), IntegrationError);
}

TEST_CASE("climb-turn reference derivatives agree with finite differences") {
  const ModelParams p = default_model_params();
  const TrimPoint trim = trim_solve(p, 120.0);
  ReferenceSpec spec;  // defaults: onset 2 s, turn 6 s, climb 3 s
  const ClimbTurnReference ref(spec, trim, p.g, 16.0);

  const double h = 1e-5;
  // hit the ramp joins as well as generic interior times
  std::vector<double> times = {1.9, 2.0, 2.1, 4.0, 5.0, 6.5, 8.0, 9.5, 12.0};
  for (int k = 0; k < 40; ++k)
    times.push_back(0.5 + 13.0 * oracles::uniform(0.0, 1.0));

  for (double t : times) {
    const ReferenceSample c = ref.at(t);
    const ReferenceSample a = ref.at(t - h);
    const ReferenceSample b = ref.at(t + h);
    const Vec6 d1_fd = (b.eta - a.eta) / (2.0 * h);
    const Vec6 d2_fd = (b.eta_dot - a.eta_dot) / (2.0 * h);
    REQUIRE((d1_fd - c.eta_dot).cwiseAbs().maxCoeff() < 1e-5);
    REQUIRE((d2_fd - c.eta_ddot).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("climb-turn position table matches direct quadrature") {
  const ModelParams p = default_model_params();
  const TrimPoint trim = trim_solve(p, 120.0);
  ReferenceSpec spec;
  const ClimbTurnReference ref(spec, trim, p.g, 16.0);

  // re-integrate the path velocity independently and compare positions
  auto f = [&](double t, const Vec3&) {
    return Vec3(ref.at(t).eta_dot.head<3>());
  };
  Vec3 pos = trim.eta0.head<3>();
  const double dt = 1e-3;
  for (int k = 0; k < 14000; ++k) pos = rk4_step(f, pos, k * dt, dt);
  REQUIRE((pos - ref.at(14.0).eta.head<3>()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("trim-hold regulation keeps every tracking error at noise level") {
  const ScenarioConfig cfg = trim_hold_config(6.0);
  const SimLog log = run_scenario(cfg);
  const MetricsReport m = metrics(log, 1.0, log.t.back());
  REQUIRE(m.eta_err_max.maxCoeff() < 1e-6);
  REQUIRE(m.v_err_max.maxCoeff() < 1e-6);
  REQUIRE(m.mom_err_rms_norm < 1e-5);
  REQUIRE(m.sat_duty.maxCoeff() == 0.0);
  REQUIRE(log.publishes.empty());  // smc_only never swaps a gain in
}

TEST_CASE("identical configuration and seed reproduce the log exactly") {
  ScenarioConfig cfg = trim_hold_config(6.0);
  cfg.mode = ControlMode::sdac;
  cfg.dither.enable = true;
  cfg.noise.enable = true;
  cfg.noise.v_std = Vec6::Constant(1e-4);
  cfg.noise.vdot_std = Vec6::Constant(1e-3);
  cfg.rng_seed = 77;

  const SimLog a = run_scenario(cfg);
  const SimLog b = run_scenario(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.t[i] == b.t[i]);
    REQUIRE((a.v[i].array() == b.v[i].array()).all());
    REQUIRE((a.eta[i].array() == b.eta[i].array()).all());
    REQUIRE((a.L_breve[i].array() == b.L_breve[i].array()).all());
    REQUIRE((a.L_d[i].array() == b.L_d[i].array()).all());
    REQUIRE((a.delta[i].array() == b.delta[i].array()).all());
    REQUIRE(a.ctrb_flag[i] == b.ctrb_flag[i]);
    REQUIRE(nan_aware_equal(a.residual[i], b.residual[i]));
    REQUIRE(a.window_id[i] == b.window_id[i]);
  }
}

TEST_CASE("published gains trace back to logged valid windows") {
  ScenarioConfig cfg;
  cfg.reference.type = ReferenceSpec::Type::trim_hold;
  cfg.mode = ControlMode::sdac;
  cfg.t_on = 4.0;
  cfg.duration = 14.0;
  cfg.uncertainty = UncertaintySpec{};
  cfg.dither.enable = true;

  const SimLog log = run_scenario(cfg);
  REQUIRE(!log.publishes.empty());
  for (const PublishEvent& pub : log.publishes) {
    REQUIRE(pub.step * cfg.dt >= cfg.t_on - 1e-9);
    REQUIRE(pub.residual <= cfg.ident_res_max);
    // the publish row carries the window id, its residual and flag 1
    REQUIRE(log.window_id[pub.step] == pub.window_id);
    REQUIRE(log.residual[pub.step] == pub.residual);
    REQUIRE(log.ctrb_flag[pub.step] == 1);
  }
  // window ids are strictly increasing across publishes
  for (std::size_t i = 1; i < log.publishes.size(); ++i)
    REQUIRE(log.publishes[i].window_id > log.publishes[i - 1].window_id);
}

TEST_CASE("metrics reproduces hand-computed statistics") {
  SimLog log;
  log.dt = 1.0;
  log.Ts = 1.0;
  for (int i = 0; i < 3; ++i) {
    log.t.push_back(static_cast<double>(i));
    log.v.push_back(Vec6::Constant(0.5));
    log.eta.push_back(Vec6::Zero());
    log.L.push_back(Vec6::Unit(2) * 2.0);
    log.L_breve.push_back(Vec6::Zero());
    log.L_d.push_back(Vec6::Zero());
    log.delta.push_back(Vec4::Zero());
    log.tau_d.push_back(Vec6::Zero());
    log.ctrb_flag.push_back(1);
    log.sat.push_back({i == 0 ? 1 : 0, 0, 0, 0});
    log.residual.push_back(0.0);
    log.window_id.push_back(-1);
    log.eta_ref.push_back(Vec6::Zero());
    log.v_ref.push_back(Vec6::Zero());
  }
  const MetricsReport m = metrics(log, 0.0, 2.0);
  REQUIRE(m.n == 3);
  REQUIRE(m.eta_err_rms.maxCoeff() == 0.0);
  REQUIRE(m.v_err_rms.minCoeff() == Catch::Approx(0.5));
  REQUIRE(m.v_err_max.maxCoeff() == Catch::Approx(0.5));
  REQUIRE(m.mom_err_rms(2) == Catch::Approx(2.0));
  REQUIRE(m.mom_err_rms_norm == Catch::Approx(2.0));
  REQUIRE(m.sat_duty(0) == Catch::Approx(1.0 / 3.0));
  REQUIRE(m.sat_duty(1) == 0.0);

  REQUIRE_THROWS_AS(metrics(log, 5.0, 6.0), ParameterError);
  REQUIRE_THROWS_AS(metrics(log, 0.4, 0.6), ParameterError);
  log.eta_ref.clear();
  REQUIRE_THROWS_AS(metrics(log, 0.0, 2.0), ParameterError);
  REQUIRE_THROWS_AS(metrics(SimLog{}, 0.0, 1.0), ParameterError);
}

TEST_CASE("free motion without gravity or thrust dissipates energy") {
  ModelParams p = default_model_params();
  p.g = 0.0;
  p.tau0 = Vec6::Zero();
  const UncertaintySpec unc;
  const Vec4 delta = Vec4::Zero();
  const Mat6 M = mass_inertia(p);

  Vec12 x = Vec12::Zero();
  x.head<6>() << 50.0, 2.0, -3.0, 0.2, -0.1, 0.15;
  auto f = [&](double, const Vec12& xx) {
    Vec12 dx;
    dx.head<6>() = body_derivative(p, unc, Vec6(xx.head<6>()),
                                   Vec3(xx.segment<3>(9)), delta);
    dx.tail<6>() = kinematics(Vec3(xx.segment<3>(9)), Vec6(xx.head<6>()));
    return dx;
  };
  double energy = x.head<6>().dot(M * x.head<6>());
  const double speed0 = x.head<3>().norm();
  for (int k = 0; k < 2000; ++k) {
    x = rk4_step(f, x, k * 0.005, 0.005);
    const double e_next = x.head<6>().dot(M * x.head<6>());
    REQUIRE(e_next <= energy * (1.0 + 1e-12));
    energy = e_next;
  }
  REQUIRE(x.head<3>().norm() < speed0);
}

TEST_CASE("uncertainty switches on exactly at the event step") {
  ScenarioConfig base = trim_hold_config(8.0);
  ScenarioConfig hit = base;
  hit.uncertainty.d_scale.row(0) = Eigen::Matrix<double, 1, 6>::Constant(1.5);
  hit.t_event = 5.0;

  const SimLog a = run_scenario(base);
  const SimLog b = run_scenario(hit);
  REQUIRE(a.size() == b.size());
  bool diverged = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.t[i] <= 5.0 + 1e-12) {
      REQUIRE((a.v[i].array() == b.v[i].array()).all());
      REQUIRE((a.L_breve[i].array() == b.L_breve[i].array()).all());
    } else if ((a.v[i] - b.v[i]).cwiseAbs().maxCoeff() > 1e-9) {
      diverged = true;
    }
  }
  REQUIRE(diverged);
}

TEST_CASE("scenario validation rejects inconsistent grids and timelines") {
  ScenarioConfig cfg = trim_hold_config(6.0);
  cfg.Ts = 0.003;  // not a multiple of dt
  REQUIRE_THROWS_AS(run_scenario(cfg), ConfigError);

  cfg = trim_hold_config(6.0);
  cfg.dt = 0.05;  // larger than Ts
  REQUIRE_THROWS_AS(run_scenario(cfg), ConfigError);

  cfg = trim_hold_config(6.0);
  cfg.t_on = 1.0;  // below one window length
  REQUIRE_THROWS_AS(run_scenario(cfg), ConfigError);

  cfg = trim_hold_config(6.0);
  cfg.uncertainty.b_scale.col(3).setConstant(0.5);
  cfg.t_event = 7.0;  // event after the end of the run
  REQUIRE_THROWS_AS(run_scenario(cfg), ConfigError);
}

TEST_CASE("configuration text maps onto the scenario structure") {
  const std::string text =
      "# comment line\n"
      "scenario.duration = 8\n"
      "scenario.mode = smc_only\n"
      "scenario.t_on = 2\n"
      "reference.type = trim_hold\n"
      "uncertainty.b_scale = 0.9, 0.8, 0.7, 0.6\n"
      "uncertainty.t_event = 5\n"
      "smc.chi = 0.25\n";
  const ScenarioConfig cfg = scenario_from_config(ConfigMap::from_string(text));
  REQUIRE(cfg.duration == 8.0);
  REQUIRE(cfg.mode == ControlMode::smc_only);
  REQUIRE(cfg.gains.chi == 0.25);
  REQUIRE(cfg.t_event == 5.0);
  REQUIRE(cfg.uncertainty.b_scale(0, 3) == 0.6);
  REQUIRE(cfg.uncertainty.b_scale(5, 0) == 0.9);
  REQUIRE(cfg.uncertainty.d_scale(0, 0) == 1.0);
  REQUIRE(cfg.dt == 0.005);  // untouched default

  REQUIRE_THROWS_AS(
      scenario_from_config(ConfigMap::from_string("scenario.mode = pid\n")),
      ConfigError);
  REQUIRE_THROWS_AS(
      scenario_from_config(ConfigMap::from_string("scenario.tson = 1\n")),
      ConfigError);
}

TEST_CASE("config reader enforces syntax, arity and uniqueness") {
  REQUIRE_THROWS_AS(ConfigMap::from_string("just words\n"), ConfigError);
  REQUIRE_THROWS_AS(ConfigMap::from_string("a = 1\na = 2\n"), ConfigError);

  const ConfigMap cfg = ConfigMap::from_string(
      "x = 1.5\nflag = on\nname = hello\nlist = 1 2, 3\n");
  REQUIRE(cfg.get_double("x", 0.0) == 1.5);
  REQUIRE(cfg.get_bool("flag", false));
  REQUIRE(cfg.get_string("name", "") == "hello");
  const VecX v = cfg.get_vector("list", 3, VecX::Zero(3));
  REQUIRE(v(2) == 3.0);
  REQUIRE_THROWS_AS(cfg.get_vector("list", 4, VecX::Zero(4)), ConfigError);
  REQUIRE_THROWS_AS(cfg.get_int("x", 0), ConfigError);  // 1.5 is not integral

  const ConfigMap bad = ConfigMap::from_string("y = 2oops\n");
  REQUIRE_THROWS_AS(bad.get_double("y", 0.0), ConfigError);

  const ConfigMap leftover = ConfigMap::from_string("used = 1\nghost = 2\n");
  REQUIRE(leftover.get_double("used", 0.0) == 1.0);
  REQUIRE_THROWS_AS(leftover.ensure_all_consumed(), ConfigError);
}

TEST_CASE("log csv writer emits the fixed schema") {
  const ScenarioConfig cfg = trim_hold_config(6.0);
  const SimLog log = run_scenario(cfg);
  const std::string path = "test_sim_log.csv";
  write_log_csv(path, log);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  REQUIRE(header ==
          "t,u,v,w,p,q,r,x,y,z,phi,theta,psi,"
          "L1,L2,L3,L4,L5,L6,Lb1,Lb2,Lb3,Lb4,Lb5,Lb6,Ld1,Ld2,Ld3,Ld4,Ld5,Ld6,"
          "d1,d2,d3,d4,tau1,tau2,tau3,tau4,tau5,tau6,"
          "ctrb,sat1,sat2,sat3,sat4,resid,window");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == log.size());
  in.close();
  std::remove(path.c_str());
}
