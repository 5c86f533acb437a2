// Command-line front end for the closed-loop scenario runner.
//
//   sdac-sim run     --config <file> --out <dir>   one scenario, full logs
//   sdac-sim compare --config <file> --out <dir>   sdac vs smc_only pairing
//   sdac-sim check   --config <file>               certification summary
//
// Exit codes: 0 success, 1 structured error, 2 certification failure.

#include "sdac/io.hpp"
#include "sdac/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace sdac;

std::string num(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

template <class V>
std::string join(const V& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += num(v(i));
  }
  return s;
}

std::string describe_run(const ScenarioConfig& cfg, const SimLog& log) {
  int flag_min = 1;
  for (int f : log.ctrb_flag) flag_min = std::min(flag_min, f);
  long sat_rows = 0;
  for (const auto& s : log.sat) sat_rows += (s[0] | s[1] | s[2] | s[3]);

  std::string r;
  r += "mode: ";
  r += (cfg.mode == ControlMode::sdac ? "sdac" : "smc_only");
  r += "\nduration: " + num(cfg.duration) + " s  dt: " + num(cfg.dt) +
       " s  Ts: " + num(cfg.Ts) + " s  window: " + num(cfg.window) + " s\n";
  r += "gain publishes: " + std::to_string(log.publishes.size());
  if (!log.publishes.empty())
    r += " (first at t = " + num(log.publishes.front().step * cfg.dt) + " s)";
  r += "\ncontrollability flag minimum: " + std::to_string(flag_min);
  r += "\nrows with any saturated effector: " + std::to_string(sat_rows);
  r += "\n";
  return r;
}

std::string describe_metrics(const std::string& name, const MetricsReport& m) {
  std::string r;
  r += name + " [" + num(m.t_from) + ", " + num(m.t_to) + "] s, " +
       std::to_string(m.n) + " samples\n";
  r += "  pose error rms:       " + join(m.eta_err_rms) + "\n";
  r += "  velocity error rms:   " + join(m.v_err_rms) + "\n";
  r += "  momentum error rms:   " + join(m.mom_err_rms) + "\n";
  r += "  momentum rms (norm):  " + num(m.mom_err_rms_norm) + "\n";
  r += "  saturation duty:      " + join(m.sat_duty) + "\n";
  return r;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const ScenarioConfig cfg = scenario_from_file(config_path);
  const SimLog log = run_scenario(cfg);
  std::filesystem::create_directories(out_dir);
  write_log_csv(out_dir + "/log.csv", log);

  std::vector<std::pair<std::string, MetricsReport>> reports;
  reports.emplace_back("full", metrics(log, 0.0, log.t.back()));
  const bool has_event = !cfg.uncertainty.is_identity();
  if (has_event && cfg.t_event + 5.0 < log.t.back())
    reports.emplace_back("post_event",
                         metrics(log, cfg.t_event + 5.0, log.t.back()));
  write_metrics_csv(out_dir + "/metrics.csv", reports);

  std::string rep = "scenario: " + config_path + "\n" + describe_run(cfg, log);
  for (const auto& [name, m] : reports) rep += "\n" + describe_metrics(name, m);
  write_text(out_dir + "/report.txt", rep);
  std::printf("%s", rep.c_str());
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir) {
  ScenarioConfig cfg = scenario_from_file(config_path);
  ScenarioConfig cfg_smc = cfg;
  cfg.mode = ControlMode::sdac;
  cfg_smc.mode = ControlMode::smc_only;

  const SimLog log_sdac = run_scenario(cfg);
  const SimLog log_smc = run_scenario(cfg_smc);
  std::filesystem::create_directories(out_dir);
  write_log_csv(out_dir + "/log_sdac.csv", log_sdac);
  write_log_csv(out_dir + "/log_smc_only.csv", log_smc);

  const double t_end = log_sdac.t.back();
  const bool has_event = !cfg.uncertainty.is_identity();
  const double t_post = has_event ? cfg.t_event + 5.0 : cfg.t_on;

  std::vector<std::pair<std::string, MetricsReport>> reports;
  reports.emplace_back("sdac_full", metrics(log_sdac, 0.0, t_end));
  reports.emplace_back("smc_only_full", metrics(log_smc, 0.0, t_end));
  MetricsReport post_sdac, post_smc;
  if (t_post < t_end) {
    post_sdac = metrics(log_sdac, t_post, t_end);
    post_smc = metrics(log_smc, t_post, t_end);
    reports.emplace_back("sdac_post", post_sdac);
    reports.emplace_back("smc_only_post", post_smc);
  }
  write_metrics_csv(out_dir + "/metrics.csv", reports);

  // command agreement between the active-gain point and the event
  const double t_a = cfg.t_on + cfg.window;
  const double t_b = has_event ? cfg.t_event : t_end;
  Vec4 agree = Vec4::Zero();
  int n_agree = 0;
  for (std::size_t i = 0; i < log_sdac.size(); ++i) {
    if (log_sdac.t[i] <= t_a || log_sdac.t[i] >= t_b) continue;
    agree += (log_sdac.delta[i] - log_smc.delta[i]).cwiseAbs();
    ++n_agree;
  }
  if (n_agree > 0) agree /= n_agree;
  const Vec4 range = cfg.params.delta_max - cfg.params.delta_min;

  std::string rep = "scenario: " + config_path + "\n";
  rep += "\n== sdac ==\n" + describe_run(cfg, log_sdac);
  rep += "\n== smc_only ==\n" + describe_run(cfg_smc, log_smc);
  rep += "\nmean command difference over (" + num(t_a) + ", " + num(t_b) +
         ") s: " + join(agree) + "\n";
  rep += "  as fraction of range:  " + join(Vec4(agree.cwiseQuotient(range))) + "\n";
  for (const auto& [name, m] : reports) rep += "\n" + describe_metrics(name, m);
  if (t_post < t_end && post_sdac.mom_err_rms_norm > 0.0) {
    rep += "\npost-event momentum rms ratio (smc_only / sdac): " +
           num(post_smc.mom_err_rms_norm / post_sdac.mom_err_rms_norm) + "\n";
  }
  write_text(out_dir + "/report.txt", rep);
  std::printf("%s", rep.c_str());
  return 0;
}

int cmd_check(const std::string& config_path) {
  const ScenarioConfig cfg = scenario_from_file(config_path);
  const SimLog log = run_scenario(cfg);

  if (!log.last_model.valid) {
    std::printf("identified model: NONE (no valid window)\ncheck: FAIL\n");
    return 2;
  }
  const LinearMomentumModel& model = log.last_model;
  std::printf("identified model: window %d, residual %s\n", model.window_id,
              num(model.residual).c_str());

  const ControllabilityResult cr = controllability(model.A, model.B);
  const bool stab = stabilizability(model.A, model.B);
  std::printf("controllability: rank %d/6 -> %s\n", cr.rank,
              cr.controllable ? "PASS" : "FAIL");
  std::printf("stabilizability: %s\n", stab ? "PASS" : "FAIL");

  // attainability of the most recent window of the reference momentum
  const int sps = static_cast<int>(std::round(cfg.Ts / cfg.dt));
  const int spw = static_cast<int>(std::round(cfg.window / cfg.Ts));
  std::vector<ManeuverSample> traj;
  const int last_sample_row =
      static_cast<int>((log.size() - 1) / sps) * sps;
  for (int j = spw; j >= 0; --j) {
    const int row = last_sample_row - j * sps;
    if (row < 0) continue;
    ManeuverSample ms;
    ms.L_d = log.L_d[row];
    if (row + sps < static_cast<int>(log.size()))
      ms.Ld_dot = (log.L_d[row + sps] - log.L_d[row]) / cfg.Ts;
    traj.push_back(ms);
  }
  const ManeuverabilityResult man =
      maneuverable(model, traj, log.last_model_L_ref, log.last_model_delta_ref,
                   cfg.params.delta_min, cfg.params.delta_max);
  std::printf("maneuverability: margin %s -> %s\n", num(man.margin).c_str(),
              man.ok ? "PASS" : "FAIL");

  const bool ok = cr.controllable && stab && man.ok;
  std::printf("check: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop momentum-control scenario workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";

  CLI::App* run = app.add_subcommand("run", "integrate one scenario and write logs");
  run->add_option("--config", config_path, "scenario configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory");

  CLI::App* compare =
      app.add_subcommand("compare", "paired sdac vs smc_only runs with joint metrics");
  compare->add_option("--config", config_path, "scenario configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--out", out_dir, "output directory");

  CLI::App* check =
      app.add_subcommand("check", "controllability and maneuverability certification");
  check->add_option("--config", config_path, "scenario configuration file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (compare->parsed()) return cmd_compare(config_path, out_dir);
    if (check->parsed()) return cmd_check(config_path);
  } catch (const SdacError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 1;
}
