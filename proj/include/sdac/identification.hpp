#pragma once

// Momentum pseudo-observation from velocity/acceleration measurements and
// windowed DMDc identification of the discrete linear momentum model.

#include "sdac/dynamics.hpp"
#include "sdac/types.hpp"

#include <Eigen/Dense>

#include <deque>
#include <limits>

namespace sdac {

inline constexpr int kIdentStateDim = 6;
inline constexpr int kIdentInputDim = 4;
inline constexpr int kIdentMinSamples = 12;
inline constexpr double kIdentSvTol = 1e-8;
inline constexpr double kIdentResMax = 1.5e-2;

/// Advance the pseudo-observed momentum one trapezoidal step using the
/// estimated parameter set and the measured velocity/acceleration at both
/// interval endpoints:
///   d(L_breve)/dt = M(p_hat) vdot + C(p_hat, v) v - S*(omega) L_breve.
inline Vec6 pseudo_observe_momentum(const Vec6& prev_L, const ModelParams& p_hat,
                                    const Vec6& v1, const Vec6& vdot1,
                                    const Vec6& v2, const Vec6& vdot2, double dt) {
  const Mat6 M = mass_inertia(p_hat);
  const Vec6 g1 = M * vdot1 + coriolis(p_hat, v1) * v1;
  const Vec6 g2 = M * vdot2 + coriolis(p_hat, v2) * v2;
  return momentum_ode_step(prev_L, g1, v1.tail<3>(), g2, v2.tail<3>(), dt);
}

/// Stateful wrapper that remembers the previous measurement endpoint.  The
/// initial condition is taken as momentum_of(p_hat, v(0)).
class PseudoObserver {
 public:
  void init(const ModelParams& p_hat, const Vec6& v0, const Vec6& vdot0) {
    L_ = momentum_of(p_hat, v0);
    v_prev_ = v0;
    vdot_prev_ = vdot0;
    primed_ = true;
  }

  const Vec6& step(const ModelParams& p_hat, const Vec6& v, const Vec6& vdot,
                   double dt) {
    if (!primed_) throw SdacError("PseudoObserver::step before init");
    L_ = pseudo_observe_momentum(L_, p_hat, v_prev_, vdot_prev_, v, vdot, dt);
    v_prev_ = v;
    vdot_prev_ = vdot;
    return L_;
  }

  const Vec6& value() const {
    if (!primed_) throw SdacError("PseudoObserver::value before init");
    return L_;
  }
  bool primed() const { return primed_; }

 private:
  Vec6 L_ = Vec6::Zero();
  Vec6 v_prev_ = Vec6::Zero();
  Vec6 vdot_prev_ = Vec6::Zero();
  bool primed_ = false;
};

/// Snapshot matrices in deviation coordinates for one identification window.
struct SnapshotWindow {
  MatX X;   // 6 x m states
  MatX Xp;  // 6 x m shifted states, column k succeeds X column k
  MatX U;   // 4 x m inputs
  double Ts = 0.0;
  int m = 0;
};

/// Identified discrete model  x_{k+1} = A x_k + B u_k + c  over one window.
/// The constant column c absorbs the one-step flow at the window's anchor
/// point; it vanishes only when the anchor is an exact equilibrium, which an
/// online window never guarantees.
struct LinearMomentumModel {
  Mat6 A = Mat6::Identity();
  Mat64 B = Mat64::Zero();
  Vec6 drift = Vec6::Zero();
  double Ts = 0.0;
  int window_id = -1;
  double residual = std::numeric_limits<double>::infinity();
  int rank = 0;
  bool valid = false;
};

/// Bounded sample buffer feeding the identifier.  Single writer; windows are
/// assembled as immutable copies, so identification can proceed while the
/// buffer keeps filling.
class SnapshotBuffer {
 public:
  explicit SnapshotBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 2) throw ParameterError("SnapshotBuffer capacity must be >= 2");
  }

  void push_sample(const Vec6& x, const Vec4& u) {
    samples_.push_back({x, u});
    if (samples_.size() > capacity_) samples_.pop_front();
  }

  std::size_t size() const { return samples_.size(); }
  std::size_t pair_count() const {
    return samples_.empty() ? 0 : samples_.size() - 1;
  }

  /// Deviation-coordinate window: states and inputs are measured relative to
  /// the oldest sample in the buffer (the window's opening sample).
  SnapshotWindow make_window(double Ts) const {
    SnapshotWindow w;
    w.Ts = Ts;
    w.m = static_cast<int>(pair_count());
    w.X.resize(6, w.m);
    w.Xp.resize(6, w.m);
    w.U.resize(4, w.m);
    if (w.m == 0) return w;
    const Vec6 x_ref = samples_.front().x;
    const Vec4 u_ref = samples_.front().u;
    for (int k = 0; k < w.m; ++k) {
      w.X.col(k) = samples_[k].x - x_ref;
      w.Xp.col(k) = samples_[k + 1].x - x_ref;
      w.U.col(k) = samples_[k].u - u_ref;
    }
    return w;
  }

  Vec6 reference_state() const {
    if (samples_.empty()) throw SdacError("SnapshotBuffer empty");
    return samples_.front().x;
  }
  Vec4 reference_input() const {
    if (samples_.empty()) throw SdacError("SnapshotBuffer empty");
    return samples_.front().u;
  }

  /// Start the next window; its opening sample is the last sample seen.
  void restart_from_last() {
    if (samples_.empty()) return;
    const Sample last = samples_.back();
    samples_.clear();
    samples_.push_back(last);
  }

  void clear() { samples_.clear(); }

 private:
  struct Sample {
    Vec6 x;
    Vec4 u;
  };
  std::deque<Sample> samples_;
  std::size_t capacity_;
};

/// DMDc regression  G = [A B c] = X' pinv([X; U; 1])  with truncated-SVD
/// pseudo-inverse.  The constant row lets the fit absorb the affine drift of
/// a window anchored away from equilibrium; on driftless data the recovered
/// c is zero and (A, B) match the plain [X; U] regression.  The model is
/// flagged invalid when the window is too short, the augmented data matrix
/// loses row rank, or the relative misfit exceeds res_max; the caller is
/// expected to hold its previous gains in that case.
inline LinearMomentumModel identify_dmdc(const SnapshotWindow& w,
                                         double sv_tol = kIdentSvTol,
                                         double res_max = kIdentResMax,
                                         int m_min = kIdentMinSamples) {
  constexpr int kRegDim = kIdentStateDim + kIdentInputDim + 1;
  LinearMomentumModel model;
  model.Ts = w.Ts;
  if (w.X.cols() != w.m || w.Xp.cols() != w.m || w.U.cols() != w.m ||
      w.X.rows() != 6 || w.Xp.rows() != 6 || w.U.rows() != 4)
    throw ParameterError("identify_dmdc: misaligned snapshot window");
  if (w.m < m_min) return model;  // invalid: too little data

  MatX Omega(kRegDim, w.m);
  Omega.topRows(kIdentStateDim) = w.X;
  Omega.middleRows(kIdentStateDim, kIdentInputDim) = w.U;
  Omega.bottomRows(1).setOnes();

  Eigen::JacobiSVD<MatX> svd(Omega, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX& sv = svd.singularValues();
  const double sig_max = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) >= sv_tol * sig_max && sv(i) > 0.0) ++rank;
  model.rank = rank;

  if (rank > 0) {
    const MatX Ur = svd.matrixU().leftCols(rank);
    const MatX Vr = svd.matrixV().leftCols(rank);
    const VecX svr_inv = sv.head(rank).cwiseInverse();
    const MatX G = w.Xp * Vr * svr_inv.asDiagonal() * Ur.transpose();
    model.A = G.leftCols(kIdentStateDim);
    model.B = G.middleCols(kIdentStateDim, kIdentInputDim);
    model.drift = G.rightCols(1);

    const double xp_norm = w.Xp.norm();
    const double err = (w.Xp - G * Omega).norm();
    model.residual = xp_norm > 0.0 ? err / xp_norm : 0.0;
  }

  model.valid = (rank == kRegDim) && (model.residual <= res_max);
  return model;
}

}  // namespace sdac
