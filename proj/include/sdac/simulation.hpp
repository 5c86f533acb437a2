#pragma once

// Closed-loop scenario runner.  The control cascade per integrator step:
// the sliding-mode layer turns the tracking error into a desired force tau_d
// and integrates the reference momentum L_d; the momentum pseudo-observer
// tracks L_breve from sampled velocity and acceleration; at each sample
// period the effector command is refreshed, either by nominal-model force
// allocation (before any gain is published, and always in smc_only mode) or
// by the data-driven momentum-error feedback.  Identification windows close
// on a fixed tiling of the sample grid; each valid window is certified for
// controllability and, when allowed, turned into a fresh feedback gain.

#include "sdac/analysis.hpp"
#include "sdac/config.hpp"
#include "sdac/dynamics.hpp"
#include "sdac/identification.hpp"
#include "sdac/lqr.hpp"
#include "sdac/reference.hpp"
#include "sdac/smc.hpp"
#include "sdac/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

namespace sdac {

using Vec12 = Eigen::Matrix<double, 12, 1>;

namespace detail {

template <class State>
bool state_finite(const State& x) {
  if constexpr (std::is_arithmetic_v<State>)
    return std::isfinite(x);
  else
    return x.allFinite();
}

inline bool near_integer(double x) {
  return std::abs(x - std::round(x)) <= 1e-6 * std::max(1.0, std::abs(x));
}

}  // namespace detail

/// Classical fourth-order Runge-Kutta step for f(t, x) -> xdot.  Works for
/// any Eigen vector state or a plain arithmetic scalar.  Throws
/// IntegrationError when any stage derivative leaves the finite domain.
template <class State, class Deriv>
State rk4_step(const Deriv& f, const State& x, double t, double dt) {
  if (!(dt > 0.0)) throw ParameterError("rk4_step: dt must be positive");
  const State k1 = f(t, x);
  const State x2 = x + 0.5 * dt * k1;
  const State k2 = f(t + 0.5 * dt, x2);
  const State x3 = x + 0.5 * dt * k2;
  const State k3 = f(t + 0.5 * dt, x3);
  const State x4 = x + dt * k3;
  const State k4 = f(t + dt, x4);
  if (!detail::state_finite(k1) || !detail::state_finite(k2) ||
      !detail::state_finite(k3) || !detail::state_finite(k4))
    throw IntegrationError("rk4_step: non-finite derivative at t = " +
                           std::to_string(t));
  const State out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!detail::state_finite(out))
    throw IntegrationError("rk4_step: non-finite state at t = " + std::to_string(t));
  return out;
}

enum class ControlMode { sdac, smc_only };

/// Deterministic per-effector square-wave probing signal added to the
/// published command.  It keeps identification windows persistently excited;
/// both scenario modes inject the identical waveform so command comparisons
/// see only the controller difference.
struct DitherSpec {
  bool enable = false;
  Vec4 amplitude = (Vec4() << 0.004, 0.003, 0.003, 0.003).finished();
  Vec4 period = (Vec4() << 0.4, 0.5, 0.8, 1.0).finished();
  double t_off = std::numeric_limits<double>::infinity();

  Vec4 at(double t) const {
    Vec4 d = Vec4::Zero();
    if (!enable || t >= t_off) return d;
    for (int j = 0; j < 4; ++j) {
      const double ph =
          std::sin(2.0 * std::numbers::pi * t / period(j) + 0.25 * (j + 1));
      d(j) = amplitude(j) * (ph >= 0.0 ? 1.0 : -1.0);
    }
    return d;
  }
};

/// Zero-mean Gaussian noise applied to the velocity and acceleration streams
/// feeding the momentum pseudo-observer.  The tracking controller and the
/// plant always see the exact state.
struct NoiseSpec {
  bool enable = false;
  Vec6 v_std = Vec6::Zero();
  Vec6 vdot_std = Vec6::Zero();
};

struct ScenarioConfig {
  ModelParams params = default_model_params();
  SmcGains gains;
  // state weights keep the strongly actuated momenta (axial force plus the
  // three moments) at unit weight and nearly release the side-force and
  // heave components, which no effector drives directly; chasing those
  // errors aggressively couples into the attitude loop and erodes the
  // closed-loop stability margin
  LqrWeights weights = LqrWeights::from_diag(
      (Vec6() << 1.0, 0.02, 0.02, 1.0, 1.0, 1.0).finished(), Vec4::Ones());

  double ident_sv_tol = kIdentSvTol;
  double ident_res_max = kIdentResMax;
  int ident_min_samples = kIdentMinSamples;
  double dare_tol = kDareTol;
  int dare_max_iter = kDareMaxIter;

  double dt = 0.005;     // integrator step
  double Ts = 0.02;      // command / sampling period
  double window = 2.0;   // identification window length
  double t_on = 10.0;    // earliest gain publish
  double duration = 40.0;

  ControlMode mode = ControlMode::sdac;
  unsigned rng_seed = 1;

  UncertaintySpec uncertainty;  // applied to the true plant from t_event on
  double t_event = 20.0;

  ReferenceSpec reference;
  DitherSpec dither;
  NoiseSpec noise;

  Vec6 v_offset = Vec6::Zero();    // initial condition offsets from trim
  Vec6 eta_offset = Vec6::Zero();

  void validate() const {
    params.validate();
    gains.validate();
    weights.validate();
    if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
    if (!(Ts >= dt)) throw ConfigError("scenario: Ts must be >= dt");
    if (!(window > 0.0)) throw ConfigError("scenario: window must be positive");
    if (!(duration > 0.0)) throw ConfigError("scenario: duration must be positive");
    if (!detail::near_integer(Ts / dt))
      throw ConfigError("scenario: Ts must be an integer multiple of dt");
    if (!detail::near_integer(window / Ts))
      throw ConfigError("scenario: window must be an integer multiple of Ts");
    if (!detail::near_integer(duration / dt))
      throw ConfigError("scenario: duration must be an integer multiple of dt");
    if (t_on < window)
      throw ConfigError("scenario: t_on must be at least one window length");
    if (!uncertainty.is_identity()) {
      if (!(t_event > 0.0) || !(duration > t_event))
        throw ConfigError("scenario: need 0 < t_event < duration");
    }
    if (!(reference.speed > 0.0))
      throw ConfigError("scenario: reference speed must be positive");
    if (reference.type == ReferenceSpec::Type::climb_turn &&
        (!(reference.turn_duration > 0.0) || !(reference.climb_duration > 0.0)))
      throw ConfigError("scenario: climb-turn ramp durations must be positive");
    if (dither.enable && dither.period.minCoeff() <= 0.0)
      throw ConfigError("scenario: dither periods must be positive");
    if (noise.enable &&
        (noise.v_std.minCoeff() < 0.0 || noise.vdot_std.minCoeff() < 0.0))
      throw ConfigError("scenario: noise deviations must be non-negative");
    if (!(ident_sv_tol > 0.0) || !(ident_res_max > 0.0) || ident_min_samples < 2)
      throw ConfigError("scenario: invalid identification thresholds");
  }
};

/// Record of one gain publish: the log row at which the new gain became
/// active and the Riccati data behind it.
struct PublishEvent {
  int step = -1;
  int window_id = -1;
  double residual = 0.0;
  Mat46 K = Mat46::Zero();
  Mat6 P1 = Mat6::Zero();
};

/// Column-oriented run log on the uniform integrator grid.  The serialized
/// schema is the column list of write_log_csv; the trailing members are
/// in-memory companions used by metrics and certification.
struct SimLog {
  double dt = 0.0;
  double Ts = 0.0;
  std::vector<double> t;
  std::vector<Vec6> v, eta, L, L_breve, L_d;
  std::vector<Vec4> delta;
  std::vector<Vec6> tau_d;
  std::vector<int> ctrb_flag;
  std::vector<std::array<int, 4>> sat;
  std::vector<double> residual;
  std::vector<int> window_id;

  std::vector<Vec6> eta_ref, v_ref;
  std::vector<PublishEvent> publishes;
  LinearMomentumModel last_model;            // most recent valid identification
  Vec6 last_model_L_ref = Vec6::Zero();      // its window base state
  Vec4 last_model_delta_ref = Vec4::Zero();  // its window base input

  std::size_t size() const { return t.size(); }
};

inline SimLog run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const ModelParams& p = cfg.params;
  const UncertaintySpec nominal{};
  const bool has_event = !cfg.uncertainty.is_identity();

  const int steps_per_sample = static_cast<int>(std::round(cfg.Ts / cfg.dt));
  const int samples_per_window = static_cast<int>(std::round(cfg.window / cfg.Ts));
  const int n_steps = static_cast<int>(std::round(cfg.duration / cfg.dt));
  const int k_event = has_event
                          ? static_cast<int>(std::round(cfg.t_event / cfg.dt))
                          : n_steps + 1;
  const int k_on = static_cast<int>(std::round(cfg.t_on / cfg.dt));

  const TrimPoint trim = trim_solve(p, cfg.reference.speed);
  const auto ref = build_reference(cfg.reference, trim, p.g, cfg.duration + 1.0);

  // nominal-model force allocation, fixed for the whole run
  Eigen::CompleteOrthogonalDecomposition<Mat64> cod(p.B_eff);
  const MatX B_pinv = cod.pseudoInverse();
  // orthogonal projector onto the effector range space; uncertainty scaling
  // acts column-wise on B_eff, so the range space (and this projector) is the
  // same for the nominal and the perturbed plant
  const Mat6 range_proj = p.B_eff * B_pinv;

  std::mt19937 rng(cfg.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw6 = [&](const Vec6& std_dev) {
    Vec6 n = Vec6::Zero();
    if (cfg.noise.enable)
      for (int i = 0; i < 6; ++i) n(i) = std_dev(i) * gauss(rng);
    return n;
  };

  Vec6 v = trim.v0 + cfg.v_offset;
  Vec6 eta = trim.eta0 + cfg.eta_offset;

  bool published = false;
  LqrGain gain;
  Vec4 delta_base = trim.delta0;
  int ctrb_flag = 1;
  int next_window_id = 0;
  double logged_residual = std::numeric_limits<double>::quiet_NaN();
  int logged_window = -1;

  SnapshotBuffer buffer(static_cast<std::size_t>(samples_per_window) + 1);

  Vec6 L_breve = Vec6::Zero(), L_d = Vec6::Zero();
  Vec4 delta_cmd = trim.delta0;
  Vec6 prev_tau_d = Vec6::Zero();
  Vec3 prev_omega = Vec3::Zero();
  Vec6 prev_v_m = Vec6::Zero(), prev_vdot_m = Vec6::Zero();
  std::array<int, 4> sat{0, 0, 0, 0};

  SimLog log;
  log.dt = cfg.dt;
  log.Ts = cfg.Ts;
  log.t.reserve(n_steps);

  for (int k = 0; k < n_steps; ++k) {
    const double t = k * cfg.dt;
    const UncertaintySpec& unc = (k >= k_event) ? cfg.uncertainty : nominal;
    const Vec3 eta2 = eta.tail<3>();

    // close the pseudo-observation interval that ended at t; the command and
    // the plant condition of that interval are still in force, so this is the
    // left-limit acceleration
    Vec6 noise_a = Vec6::Zero();
    if (k > 0) {
      const UncertaintySpec& unc_prev =
          (k - 1 >= k_event) ? cfg.uncertainty : nominal;
      const Vec6 v_m = v + draw6(cfg.noise.v_std);
      noise_a = draw6(cfg.noise.vdot_std);
      const Vec6 vdot_m = body_derivative(p, unc_prev, v, eta2, delta_cmd) + noise_a;
      L_breve = pseudo_observe_momentum(L_breve, p, prev_v_m, prev_vdot_m, v_m,
                                        vdot_m, cfg.dt);
      prev_v_m = v_m;
      prev_vdot_m = vdot_m;
    }

    // tracking layer and reference momentum
    const ReferenceSample rs = ref->at(t);
    const SmcOutput smc =
        smc_force(p, cfg.gains, v, eta, rs.eta, rs.eta_dot, rs.eta_ddot);
    const Vec3 omega = v.tail<3>();
    // the allocation cannot realize demand components outside the effector
    // range space; integrating them into L_d would grow a reference the
    // closed loop can never follow (and destabilize the gain loop), so only
    // the attainable component drives the reference momentum
    const Vec6 tau_att = range_proj * smc.tau_d;
    if (k == 0)
      L_d = momentum_of(p, v);
    else
      L_d = reference_momentum_step(L_d, prev_tau_d, prev_omega, tau_att,
                                    omega, cfg.dt);
    // fresh start for the gain loop: the reference re-anchors to the true
    // momentum the instant the data-driven layer becomes eligible
    if (k == k_on) L_d = momentum_of(p, v);
    prev_tau_d = tau_att;
    prev_omega = omega;

    // command refresh on the sample grid
    if (k % steps_per_sample == 0) {
      Vec4 raw;
      if (published) {
        raw = lqr_control(gain, L_breve, L_d, delta_base, p.delta_min,
                          p.delta_max)
                  .delta_raw;
      } else {
        raw = B_pinv *
              (smc.tau_d - p.tau0 + gravity_vector(p, eta2) - p.D * v);
      }
      const Vec4 held = clamp_delta(raw, p);  // publish latch, dither excluded
      const Vec4 raw_total = raw + cfg.dither.at(t);
      delta_cmd = clamp_delta(raw_total, p);
      for (int j = 0; j < 4; ++j)
        sat[j] = (raw_total(j) < p.delta_min(j) || raw_total(j) > p.delta_max(j))
                     ? 1
                     : 0;

      // re-anchor the observer endpoint under the newly held command
      if (k == 0) {
        const Vec6 v_m = v + draw6(cfg.noise.v_std);
        noise_a = draw6(cfg.noise.vdot_std);
        L_breve = momentum_of(p, v_m);
        prev_v_m = v_m;
      }
      prev_vdot_m = body_derivative(p, unc, v, eta2, delta_cmd) + noise_a;

      buffer.push_sample(L_breve, delta_cmd);
      if (buffer.pair_count() == static_cast<std::size_t>(samples_per_window)) {
        const SnapshotWindow w = buffer.make_window(cfg.Ts);
        LinearMomentumModel model =
            identify_dmdc(w, cfg.ident_sv_tol, cfg.ident_res_max,
                          cfg.ident_min_samples);
        model.window_id = next_window_id++;
        logged_residual = model.residual;
        logged_window = model.window_id;
        if (model.valid) {
          log.last_model = model;
          log.last_model_L_ref = buffer.reference_state();
          log.last_model_delta_ref = buffer.reference_input();
          const ControllabilityResult cr = controllability(model.A, model.B);
          ctrb_flag = cr.controllable ? 1 : 0;
          if (cr.controllable && cfg.mode == ControlMode::sdac && k >= k_on) {
            try {
              const LqrGain fresh = solve_dare(model.A, model.B, cfg.weights,
                                               cfg.dare_tol, cfg.dare_max_iter);
              gain = fresh;
              delta_base = held;
              published = true;
              log.publishes.push_back(
                  {k, model.window_id, model.residual, fresh.K, fresh.P1});
            } catch (const SolverError&) {
              // keep the previous gain; the next window gets another chance
            }
          }
        }
        buffer.restart_from_last();
      }
    }

    log.t.push_back(t);
    log.v.push_back(v);
    log.eta.push_back(eta);
    log.L.push_back(momentum_of(p, v));
    log.L_breve.push_back(L_breve);
    log.L_d.push_back(L_d);
    log.delta.push_back(delta_cmd);
    log.tau_d.push_back(smc.tau_d);
    log.ctrb_flag.push_back(ctrb_flag);
    log.sat.push_back(sat);
    log.residual.push_back(logged_residual);
    log.window_id.push_back(logged_window);
    log.eta_ref.push_back(rs.eta);
    log.v_ref.push_back(euler_transform_inverse(Vec3(rs.eta.tail<3>())) *
                        rs.eta_dot);

    // advance the plant under the held command
    Vec12 x;
    x << v, eta;
    const auto plant = [&](double, const Vec12& xx) {
      const Vec6 vv = xx.head<6>();
      const Vec3 ee = xx.segment<3>(9);
      Vec12 dx;
      dx.head<6>() = body_derivative(p, unc, vv, ee, delta_cmd);
      dx.tail<6>() = kinematics(ee, vv);
      return dx;
    };
    x = rk4_step(plant, x, t, cfg.dt);
    v = x.head<6>();
    eta = x.tail<6>();
  }
  return log;
}

/// Per-axis tracking statistics over [t_from, t_to] plus the effector
/// saturation duty cycle.
struct MetricsReport {
  double t_from = 0.0, t_to = 0.0;
  int n = 0;
  Vec6 eta_err_rms = Vec6::Zero(), eta_err_max = Vec6::Zero();
  Vec6 v_err_rms = Vec6::Zero(), v_err_max = Vec6::Zero();
  Vec6 mom_err_rms = Vec6::Zero(), mom_err_max = Vec6::Zero();
  double mom_err_rms_norm = 0.0;  // rms of |L - L_d| over the window
  Vec4 sat_duty = Vec4::Zero();
};

inline MetricsReport metrics(const SimLog& log, double t_from, double t_to) {
  if (log.size() == 0) throw ParameterError("metrics: empty log");
  if (log.eta_ref.size() != log.size() || log.v_ref.size() != log.size())
    throw ParameterError("metrics: log lacks reference companions");
  const double tol = 1e-9 * std::max(1.0, std::abs(t_to));
  if (!(t_from < t_to) || t_from < log.t.front() - tol ||
      t_to > log.t.back() + tol)
    throw ParameterError("metrics: window must lie inside the log");

  MetricsReport r;
  r.t_from = t_from;
  r.t_to = t_to;
  Vec6 eta_sq = Vec6::Zero(), v_sq = Vec6::Zero(), L_sq = Vec6::Zero();
  Vec4 sat_sum = Vec4::Zero();
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log.t[i] < t_from - tol || log.t[i] > t_to + tol) continue;
    const Vec6 e_eta = log.eta[i] - log.eta_ref[i];
    const Vec6 e_v = log.v[i] - log.v_ref[i];
    const Vec6 e_L = log.L[i] - log.L_d[i];
    eta_sq += e_eta.cwiseAbs2();
    v_sq += e_v.cwiseAbs2();
    L_sq += e_L.cwiseAbs2();
    norm_sq += e_L.squaredNorm();
    r.eta_err_max = r.eta_err_max.cwiseMax(e_eta.cwiseAbs());
    r.v_err_max = r.v_err_max.cwiseMax(e_v.cwiseAbs());
    r.mom_err_max = r.mom_err_max.cwiseMax(e_L.cwiseAbs());
    for (int j = 0; j < 4; ++j) sat_sum(j) += log.sat[i][j];
    ++r.n;
  }
  if (r.n == 0) throw ParameterError("metrics: no samples in window");
  eta_sq /= r.n;
  v_sq /= r.n;
  L_sq /= r.n;
  r.eta_err_rms = eta_sq.cwiseSqrt();
  r.v_err_rms = v_sq.cwiseSqrt();
  r.mom_err_rms = L_sq.cwiseSqrt();
  r.mom_err_rms_norm = std::sqrt(norm_sq / r.n);
  r.sat_duty = sat_sum / r.n;
  return r;
}

/// Build a ScenarioConfig from a parsed key = value file.  Every key is
/// optional; omitted groups keep the built-in sub-scale airframe and the
/// default timeline.  Unknown keys raise ConfigError.
inline ScenarioConfig scenario_from_config(const ConfigMap& cfg) {
  ScenarioConfig sc;

  // model
  ModelParams dp = sc.params;
  sc.params.m = cfg.get_double("model.mass", dp.m);
  {
    VecX inertia(9);
    Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(inertia.data()) = dp.I_M;
    const VecX got = cfg.get_vector("model.inertia", 9, inertia);
    sc.params.I_M =
        Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(got.data());
  }
  sc.params.rho = cfg.get_vector("model.rho", 3, dp.rho);
  sc.params.g = cfg.get_double("model.g", dp.g);
  {
    VecX damping(36);
    Eigen::Map<Eigen::Matrix<double, 6, 6, Eigen::RowMajor>>(damping.data()) = dp.D;
    const VecX got = cfg.get_vector("model.damping", 36, damping);
    sc.params.D =
        Eigen::Map<const Eigen::Matrix<double, 6, 6, Eigen::RowMajor>>(got.data());
  }
  {
    VecX eff(24);
    Eigen::Map<Eigen::Matrix<double, 6, 4, Eigen::RowMajor>>(eff.data()) = dp.B_eff;
    const VecX got = cfg.get_vector("model.effectors", 24, eff);
    sc.params.B_eff =
        Eigen::Map<const Eigen::Matrix<double, 6, 4, Eigen::RowMajor>>(got.data());
  }
  sc.params.tau0 = cfg.get_vector("model.tau0", 6, dp.tau0);
  sc.params.delta_min = cfg.get_vector("model.delta_min", 4, dp.delta_min);
  sc.params.delta_max = cfg.get_vector("model.delta_max", 4, dp.delta_max);

  // tracking controller
  sc.gains.lambda_diag = cfg.get_vector("smc.lambda", 6, sc.gains.lambda_diag);
  sc.gains.gamma_diag = cfg.get_vector("smc.gamma", 6, sc.gains.gamma_diag);
  sc.gains.chi = cfg.get_double("smc.chi", sc.gains.chi);
  sc.gains.eps = cfg.get_double("smc.eps", sc.gains.eps);

  // momentum-error feedback
  sc.weights = LqrWeights::from_diag(
      cfg.get_vector("lqr.q_diag", 6, sc.weights.Q.diagonal()),
      cfg.get_vector("lqr.r_diag", 4, sc.weights.R.diagonal()));
  sc.dare_tol = cfg.get_double("lqr.dare_tol", sc.dare_tol);
  sc.dare_max_iter = cfg.get_int("lqr.dare_max_iter", sc.dare_max_iter);

  // identification thresholds
  sc.ident_sv_tol = cfg.get_double("ident.sv_tol", sc.ident_sv_tol);
  sc.ident_res_max = cfg.get_double("ident.res_max", sc.ident_res_max);
  sc.ident_min_samples = cfg.get_int("ident.min_samples", sc.ident_min_samples);

  // timeline
  sc.dt = cfg.get_double("scenario.dt", sc.dt);
  sc.Ts = cfg.get_double("scenario.ts", sc.Ts);
  sc.window = cfg.get_double("scenario.window", sc.window);
  sc.t_on = cfg.get_double("scenario.t_on", sc.t_on);
  sc.duration = cfg.get_double("scenario.duration", sc.duration);
  sc.rng_seed = static_cast<unsigned>(cfg.get_int("scenario.seed", 1));
  {
    const std::string mode = cfg.get_string("scenario.mode", "sdac");
    if (mode == "sdac")
      sc.mode = ControlMode::sdac;
    else if (mode == "smc_only")
      sc.mode = ControlMode::smc_only;
    else
      throw ConfigError("scenario.mode must be 'sdac' or 'smc_only'");
  }

  // uncertainty event: d_scale scales damping rows, b_scale effector columns
  sc.t_event = cfg.get_double("uncertainty.t_event", sc.t_event);
  {
    const Vec6 d_rows = cfg.get_vector("uncertainty.d_scale", 6, Vec6::Ones());
    const Vec4 b_cols = cfg.get_vector("uncertainty.b_scale", 4, Vec4::Ones());
    sc.uncertainty.d_scale = d_rows.replicate(1, 6);
    sc.uncertainty.b_scale = b_cols.transpose().replicate(6, 1);
    sc.uncertainty.f_add.f0 = cfg.get_vector("uncertainty.f0", 6, Vec6::Zero());
  }

  // reference trajectory
  {
    const std::string type = cfg.get_string("reference.type", "climb_turn");
    if (type == "trim_hold")
      sc.reference.type = ReferenceSpec::Type::trim_hold;
    else if (type == "climb_turn")
      sc.reference.type = ReferenceSpec::Type::climb_turn;
    else
      throw ConfigError("reference.type must be 'trim_hold' or 'climb_turn'");
  }
  sc.reference.speed = cfg.get_double("reference.speed", sc.reference.speed);
  sc.reference.t_start = cfg.get_double("reference.t_start", sc.reference.t_start);
  sc.reference.turn_duration =
      cfg.get_double("reference.turn_duration", sc.reference.turn_duration);
  sc.reference.psi_total =
      cfg.get_double("reference.psi_total", sc.reference.psi_total);
  sc.reference.climb_duration =
      cfg.get_double("reference.climb_duration", sc.reference.climb_duration);
  sc.reference.gamma_max =
      cfg.get_double("reference.gamma_max", sc.reference.gamma_max);

  // probing and measurement noise
  sc.dither.enable = cfg.get_bool("dither.enable", sc.dither.enable);
  sc.dither.amplitude = cfg.get_vector("dither.amplitude", 4, sc.dither.amplitude);
  sc.dither.period = cfg.get_vector("dither.period", 4, sc.dither.period);
  sc.dither.t_off = cfg.get_double("dither.t_off", sc.dither.t_off);
  sc.noise.enable = cfg.get_bool("noise.enable", sc.noise.enable);
  sc.noise.v_std = cfg.get_vector("noise.v_std", 6, sc.noise.v_std);
  sc.noise.vdot_std = cfg.get_vector("noise.vdot_std", 6, sc.noise.vdot_std);

  // initial condition offsets
  sc.v_offset = cfg.get_vector("init.v_offset", 6, sc.v_offset);
  sc.eta_offset = cfg.get_vector("init.eta_offset", 6, sc.eta_offset);

  cfg.ensure_all_consumed();
  sc.validate();
  return sc;
}

inline ScenarioConfig scenario_from_file(const std::string& path) {
  return scenario_from_config(ConfigMap::from_file(path));
}

}  // namespace sdac
