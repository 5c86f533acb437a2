#pragma once

// Certification utilities for the identified momentum model: controllability
// rank, PBH stabilizability, and a conservative one-step maneuverability
// check of a reference momentum trajectory under box input constraints.

#include "sdac/identification.hpp"
#include "sdac/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sdac {

inline constexpr double kRankTol = 1e-9;

struct ControllabilityResult {
  Eigen::Matrix<double, 6, 24> C = Eigen::Matrix<double, 6, 24>::Zero();
  int rank = 0;
  bool controllable = false;
};

/// Numerical rank of [B AB ... A^5 B]; singular values below tol * sigma_max
/// do not count.
inline ControllabilityResult controllability(const Mat6& A, const Mat64& B,
                                             double tol = kRankTol) {
  ControllabilityResult res;
  Mat64 AkB = B;
  for (int k = 0; k < 6; ++k) {
    res.C.middleCols<4>(4 * k) = AkB;
    AkB = A * AkB;
  }
  Eigen::JacobiSVD<MatX> svd{MatX(res.C)};
  const VecX& sv = svd.singularValues();
  const double sig_max = sv.size() > 0 ? sv(0) : 0.0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sig_max && sv(i) > 0.0) ++res.rank;
  res.controllable = (res.rank == 6);
  return res;
}

/// Discrete-time PBH test: every eigenvalue of A with |lambda| >= 1 must keep
/// [A - lambda I, B] at full row rank.
inline bool stabilizability(const Mat6& A, const Mat64& B, double tol = kRankTol) {
  Eigen::EigenSolver<Mat6> es(A);
  if (es.info() != Eigen::Success)
    throw SolverError("stabilizability: eigen decomposition failed");
  for (int i = 0; i < 6; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam) < 1.0) continue;
    Eigen::MatrixXcd P(6, 10);
    P.leftCols<6>() = A.cast<std::complex<double>>() -
                      lam * Eigen::MatrixXcd::Identity(6, 6);
    P.rightCols<4>() = B.cast<std::complex<double>>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
    const VecX sv = svd.singularValues();
    int rank = 0;
    const double sig_max = sv.size() > 0 ? sv(0) : 0.0;
    for (int j = 0; j < sv.size(); ++j)
      if (sv(j) > tol * sig_max && sv(j) > 0.0) ++rank;
    if (rank < 6) return false;
  }
  return true;
}

/// Exact coordinate-descent solver for  min ||B u - b||^2,  u in [lo, hi].
/// The objective is strictly convex in each coordinate whenever the matching
/// column of B is nonzero, so cyclic minimization converges to the unique
/// box-constrained optimum.
inline Vec4 bounded_least_squares(const Mat64& B, const Vec6& b, const Vec4& lo,
                                  const Vec4& hi, int max_sweeps = 500) {
  const Mat4 BtB = B.transpose() * B;
  const Vec4 Btb = B.transpose() * b;
  Vec4 u = Vec4::Zero().cwiseMax(lo).cwiseMin(hi);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double diag = BtB(j, j);
      if (diag <= 1e-300) continue;  // dead effector column
      double r = Btb(j);
      for (int l = 0; l < 4; ++l)
        if (l != j) r -= BtB(j, l) * u(l);
      const double u_new = std::min(hi(j), std::max(lo(j), r / diag));
      change = std::max(change, std::abs(u_new - u(j)));
      u(j) = u_new;
    }
    if (change < 1e-14) break;
  }
  return u;
}

/// One sample of the reference momentum trajectory in absolute coordinates.
struct ManeuverSample {
  Vec6 L_d = Vec6::Zero();
  Vec6 Ld_dot = Vec6::Zero();
};

struct ManeuverabilityResult {
  bool ok = false;
  double margin = 0.0;           // min normalized distance to the input box
  std::vector<double> residuals; // per-step relative feasibility residual
  std::vector<double> margins;   // per-step margin
};

inline constexpr double kFeasTol = 1e-2;

/// Conservative attainability certificate: for each consecutive reference
/// pair the one-step requirement  dL_{d,k+1} = A dL_{d,k} + B ddelta  must be
/// met by an input inside the admissible box (all in deviation coordinates
/// around the window base L_ref / delta_base).  ok requires every relative
/// residual below feas_tol.  Only the one-step horizon is implemented.
inline ManeuverabilityResult maneuverable(const LinearMomentumModel& model,
                                          const std::vector<ManeuverSample>& traj,
                                          const Vec6& L_ref, const Vec4& delta_base,
                                          const Vec4& delta_min, const Vec4& delta_max,
                                          int horizon = 1,
                                          double feas_tol = kFeasTol) {
  if (!model.valid)
    throw ParameterError("maneuverable: model flagged invalid");
  if (horizon != 1)
    throw SolverError("maneuverable: only the one-step horizon is implemented");
  if (traj.size() < 2)
    throw ParameterError("maneuverable: need at least two reference samples");

  const Vec4 lo = delta_min - delta_base;
  const Vec4 hi = delta_max - delta_base;
  const Vec4 half = 0.5 * (delta_max - delta_min);

  ManeuverabilityResult res;
  res.ok = true;
  res.margin = 1.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Vec6 x_k = traj[k].L_d - L_ref;
    const Vec6 x_k1 = traj[k + 1].L_d - L_ref;
    const Vec6 b = x_k1 - model.A * x_k - model.drift;
    const Vec4 u = bounded_least_squares(model.B, b, lo, hi);

    const double rel = (model.B * u - b).norm() / std::max(1.0, b.norm());
    res.residuals.push_back(rel);
    if (rel > feas_tol) res.ok = false;

    double m_k = 1.0;
    for (int j = 0; j < 4; ++j) {
      const double d = std::min(hi(j) - u(j), u(j) - lo(j)) / half(j);
      m_k = std::min(m_k, d);
    }
    res.margins.push_back(m_k);
    res.margin = std::min(res.margin, m_k);
  }
  return res;
}

}  // namespace sdac
