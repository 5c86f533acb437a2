#pragma once

// Shared independent oracles for the test suite: finite-difference Jacobians,
// deterministic random model generation, and a structure-preserving doubling
// solver for the discrete Riccati equation used to cross-check the
// fixed-point implementation.

#include "sdac/types.hpp"

#include <Eigen/Dense>

#include <functional>
#include <random>

namespace oracles {

using sdac::Mat3;
using sdac::Mat6;
using sdac::Mat64;
using sdac::MatX;
using sdac::Vec3;
using sdac::Vec4;
using sdac::Vec6;
using sdac::VecX;

/// Central-difference Jacobian of f: R^n -> R^m.
template <typename F>
MatX fd_jacobian(F&& f, const VecX& x0, double h = 1e-6) {
  const VecX f0 = f(x0);
  MatX J(f0.size(), x0.size());
  for (int j = 0; j < x0.size(); ++j) {
    VecX xp = x0, xm = x0;
    const double hj = h * std::max(1.0, std::abs(x0(j)));
    xp(j) += hj;
    xm(j) -= hj;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * hj);
  }
  return J;
}

/// Deterministic RNG for test data; fixed seed keeps failures reproducible.
inline std::mt19937& rng() {
  static std::mt19937 gen(0x5dac);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

template <int N>
Eigen::Matrix<double, N, 1> uniform_vec(double lo, double hi) {
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = uniform(lo, hi);
  return v;
}

/// Random physically consistent parameter set with nonzero c.g. offset.
/// Magnitudes stay moderate so FD comparisons keep their accuracy.
inline sdac::ModelParams random_params(bool with_offset = true) {
  sdac::ModelParams p;
  p.m = uniform(0.5, 5.0);
  Mat3 Q = Mat3::Random();  // Eigen's Random uses its own seed; fine for shaping
  p.I_M = Q * Q.transpose() + 2.0 * Mat3::Identity();
  p.rho = with_offset ? Vec3(uniform(-0.3, 0.3), uniform(-0.3, 0.3), uniform(-0.3, 0.3))
                      : Vec3::Zero();
  p.g = 32.174;
  Mat6 Dr = 0.3 * Mat6::Random();
  p.D = Dr - 3.0 * Mat6::Identity();  // sym part strictly negative definite
  p.B_eff = Mat64::Random();
  p.tau0 = Vec6::Random();
  p.delta_min = Vec4::Constant(-1.0);
  p.delta_max = Vec4::Constant(1.0);
  p.validate();
  return p;
}

/// Random attitude bounded away from the kinematic singularity.
inline Vec3 random_attitude(double theta_max = 1.2) {
  return Vec3(uniform(-2.5, 2.5), uniform(-theta_max, theta_max), uniform(-3.0, 3.0));
}

/// Classic Newton-Euler force evaluation used as the oracle for C(v) v:
/// translational m(omega x V + omega x (omega x rho)) and rotational
/// omega x (I omega) + m rho x (omega x V), written with raw cross products.
inline Vec6 coriolis_force_reference(const sdac::ModelParams& p, const Vec6& v) {
  const Vec3 V = v.head<3>();
  const Vec3 w = v.tail<3>();
  Vec6 out;
  out.head<3>() = p.m * (w.cross(V) + w.cross(w.cross(p.rho)));
  out.tail<3>() = w.cross(Vec3(p.I_M * w)) + p.m * p.rho.cross(w.cross(V));
  return out;
}

/// Structure-preserving doubling iteration for the DARE
///   P = A'PA - A'PB (R + B'PB)^{-1} B'PA + Q.
/// Independent of the fixed-point solver under test.
inline MatX dare_doubling(const MatX& A, const MatX& B, const MatX& Q, const MatX& R,
                          int iters = 60) {
  const int n = static_cast<int>(A.rows());
  MatX Ak = A;
  MatX Gk = B * R.ldlt().solve(B.transpose());
  MatX Hk = Q;
  const MatX I = MatX::Identity(n, n);
  for (int i = 0; i < iters; ++i) {
    const MatX W = I + Gk * Hk;
    const auto Wlu = W.partialPivLu();
    const MatX A1 = Ak * Wlu.solve(Ak);
    const MatX G1 = Gk + Ak * Wlu.solve(Gk * Ak.transpose());
    const MatX H1 = Hk + Ak.transpose() * Hk * Wlu.solve(Ak);
    if ((A1 - Ak).norm() < 1e-300) break;
    Ak = A1;
    Gk = G1;
    Hk = H1;
  }
  return Hk;
}

}  // namespace oracles
