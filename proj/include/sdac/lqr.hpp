#pragma once

// Infinite-horizon discrete LQR on the identified momentum model.  The
// continuous Riccati statement of the source model is realized in discrete
// time because the identified model is itself a discrete map at Ts; the
// terminal-weight variant is intentionally unsupported.

#include "sdac/analysis.hpp"
#include "sdac/types.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace sdac {

inline constexpr double kDareTol = 1e-11;
inline constexpr int kDareMaxIter = 50000;

struct LqrWeights {
  Mat6 Q = Mat6::Identity();
  Mat4 R = Mat4::Identity();

  static LqrWeights from_diag(const Vec6& q_diag, const Vec4& r_diag) {
    LqrWeights w;
    w.Q = q_diag.asDiagonal();
    w.R = r_diag.asDiagonal();
    return w;
  }

  void validate() const {
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw ParameterError("Q must be symmetric");
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw ParameterError("R must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat6> eq(Q);
    if (eq.eigenvalues().minCoeff() < -1e-12)
      throw ParameterError("Q must be positive semidefinite");
    Eigen::SelfAdjointEigenSolver<Mat4> er(R);
    if (er.eigenvalues().minCoeff() <= 0.0)
      throw ParameterError("R must be positive definite");
  }
};

struct LqrGain {
  Mat46 K = Mat46::Zero();
  Mat6 P1 = Mat6::Zero();
  double spectral_radius = 0.0;
};

inline double spectral_radius_of(const Mat6& A) {
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

/// Solve the DARE  P = A'PA - A'PB (R + B'PB)^{-1} B'PA + Q  by fixed-point
/// iteration from P = Q, then form K = (R + B'PB)^{-1} B'PA.  Iteration stops
/// when the max-norm residual ||P_next - P|| drops below tol.  Throws
/// SolverError for non-stabilizable pairs or when max_iter is exhausted.
inline LqrGain solve_dare(const Mat6& A, const Mat64& B, const LqrWeights& w,
                          double tol = kDareTol, int max_iter = kDareMaxIter) {
  w.validate();
  if (!stabilizability(A, B))
    throw SolverError("solve_dare: (A,B) not stabilizable");

  Mat6 P = w.Q;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Mat4 S = w.R + B.transpose() * P * B;
    const Mat46 BtPA = B.transpose() * P * A;
    const Mat6 Pn = A.transpose() * P * A -
                    BtPA.transpose() * S.ldlt().solve(BtPA) + w.Q;
    residual = (Pn - P).cwiseAbs().maxCoeff();
    P = 0.5 * (Pn + Pn.transpose());  // keep symmetric against drift
    if (residual < tol) break;
  }
  if (!(residual < tol))
    throw SolverError("solve_dare: no convergence, residual " +
                      std::to_string(residual));

  LqrGain g;
  g.P1 = P;
  const Mat4 S = w.R + B.transpose() * P * B;
  g.K = S.ldlt().solve(B.transpose() * P * A);
  g.spectral_radius = spectral_radius_of(A - B * g.K);
  if (!(g.spectral_radius < 1.0))
    throw SolverError("solve_dare: closed loop not contractive, rho = " +
                      std::to_string(g.spectral_radius));
  return g;
}

struct LqrCommand {
  Vec4 delta = Vec4::Zero();      // clamped command
  Vec4 delta_raw = Vec4::Zero();  // pre-saturation command
};

/// Momentum-error feedback around the latched window base:
///   delta = clamp(delta_base - K (L_meas - L_d)).
/// Saturation is silent; the caller compares delta with delta_raw to log it.
inline LqrCommand lqr_control(const LqrGain& gain, const Vec6& L_meas,
                              const Vec6& L_d, const Vec4& delta_base,
                              const Vec4& delta_min, const Vec4& delta_max) {
  LqrCommand cmd;
  cmd.delta_raw = delta_base - gain.K * (L_meas - L_d);
  cmd.delta = cmd.delta_raw.cwiseMax(delta_min).cwiseMin(delta_max);
  return cmd;
}

}  // namespace sdac
