#pragma once

// Plain-text artifact writers.  All floating point goes through "%.17g" so a
// rerun with identical inputs reproduces the files byte for byte.

#include "sdac/simulation.hpp"
#include "sdac/types.hpp"

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace sdac {

namespace detail {

inline void append_num(std::string& line, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  line += buf;
}

inline void append_num(std::string& line, int x) {
  line += std::to_string(x);
}

class OutFile {
 public:
  explicit OutFile(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
    if (!f_) throw SdacError("io: cannot open '" + path + "' for writing");
  }
  ~OutFile() {
    if (f_) std::fclose(f_);
  }
  OutFile(const OutFile&) = delete;
  OutFile& operator=(const OutFile&) = delete;

  void line(const std::string& s) {
    std::fwrite(s.data(), 1, s.size(), f_);
    std::fputc('\n', f_);
  }

  void raw(const std::string& s) { std::fwrite(s.data(), 1, s.size(), f_); }

 private:
  std::FILE* f_;
};

}  // namespace detail

/// Serialize the run log.  Column order is fixed: time, body velocity, pose,
/// true momentum, pseudo-observed momentum, reference momentum, commands,
/// desired force, controllability flag, saturation flags, identification
/// residual and window id.
inline void write_log_csv(const std::string& path, const SimLog& log) {
  detail::OutFile f(path);
  f.line(
      "t,u,v,w,p,q,r,x,y,z,phi,theta,psi,"
      "L1,L2,L3,L4,L5,L6,Lb1,Lb2,Lb3,Lb4,Lb5,Lb6,Ld1,Ld2,Ld3,Ld4,Ld5,Ld6,"
      "d1,d2,d3,d4,tau1,tau2,tau3,tau4,tau5,tau6,"
      "ctrb,sat1,sat2,sat3,sat4,resid,window");
  std::string line;
  for (std::size_t i = 0; i < log.size(); ++i) {
    line.clear();
    detail::append_num(line, log.t[i]);
    const Vec6* blocks6[] = {&log.v[i],       &log.eta[i], &log.L[i],
                             &log.L_breve[i], &log.L_d[i]};
    for (const Vec6* b : blocks6)
      for (int j = 0; j < 6; ++j) {
        line += ',';
        detail::append_num(line, (*b)(j));
      }
    for (int j = 0; j < 4; ++j) {
      line += ',';
      detail::append_num(line, log.delta[i](j));
    }
    for (int j = 0; j < 6; ++j) {
      line += ',';
      detail::append_num(line, log.tau_d[i](j));
    }
    line += ',';
    detail::append_num(line, log.ctrb_flag[i]);
    for (int j = 0; j < 4; ++j) {
      line += ',';
      detail::append_num(line, log.sat[i][j]);
    }
    line += ',';
    detail::append_num(line, log.residual[i]);
    line += ',';
    detail::append_num(line, log.window_id[i]);
    f.line(line);
  }
}

/// Long-format metrics table: one row per run, statistic and axis.
inline void write_metrics_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, MetricsReport>>& reports) {
  detail::OutFile f(path);
  f.line("run,metric,axis,value");
  std::string line;
  auto emit = [&](const std::string& run, const std::string& metric, int axis,
                  double value) {
    line.clear();
    line += run;
    line += ',';
    line += metric;
    line += ',';
    detail::append_num(line, axis);
    line += ',';
    detail::append_num(line, value);
    f.line(line);
  };
  for (const auto& [run, r] : reports) {
    emit(run, "t_from", 0, r.t_from);
    emit(run, "t_to", 0, r.t_to);
    emit(run, "samples", 0, static_cast<double>(r.n));
    for (int j = 0; j < 6; ++j) {
      emit(run, "eta_err_rms", j, r.eta_err_rms(j));
      emit(run, "eta_err_max", j, r.eta_err_max(j));
      emit(run, "v_err_rms", j, r.v_err_rms(j));
      emit(run, "v_err_max", j, r.v_err_max(j));
      emit(run, "mom_err_rms", j, r.mom_err_rms(j));
      emit(run, "mom_err_max", j, r.mom_err_max(j));
    }
    emit(run, "mom_err_rms_norm", 0, r.mom_err_rms_norm);
    for (int j = 0; j < 4; ++j) emit(run, "sat_duty", j, r.sat_duty(j));
  }
}

inline void write_text(const std::string& path, const std::string& content) {
  detail::OutFile f(path);
  f.raw(content);
}

}  // namespace sdac
