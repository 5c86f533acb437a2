#pragma once

// Exact nonlinear 6-DOF rigid-body dynamics in body coordinates, the
// generalized-momentum form, analytic linearizations about a trim point, and
// the trim solver itself.
//
// State conventions (z-down body frame):
//   v   = [u v w p q r]'     body linear and angular velocity
//   eta = [X Y Z Phi Theta Psi]'  earth position and ZYX Euler attitude
//   L   = M v                generalized momentum
//
// Equation of motion:  M vdot + C(v) v = tau,
//   tau = tau0 - G(eta) + D v + B delta + f(v, delta).

#include "sdac/types.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace sdac {

/// Cross-product matrix: skew(a) b = a x b.
inline Mat3 skew(const Vec3& a) {
  Mat3 S;
  S << 0.0, -a(2), a(1),
       a(2), 0.0, -a(0),
       -a(1), a(0), 0.0;
  return S;
}

/// Block-diagonal angular coupling acting on a generalized 6-vector.
inline Mat6 skew_star(const Vec3& omega) {
  Mat6 S = Mat6::Zero();
  S.topLeftCorner<3, 3>() = skew(omega);
  S.bottomRightCorner<3, 3>() = skew(omega);
  return S;
}

/// Generalized mass-inertia matrix including the c.g. offset coupling.
inline Mat6 mass_inertia(const ModelParams& p) {
  Mat6 M = Mat6::Zero();
  M.topLeftCorner<3, 3>() = p.m * Mat3::Identity();
  M.topRightCorner<3, 3>() = -p.m * skew(p.rho);
  M.bottomLeftCorner<3, 3>() = p.m * skew(p.rho);
  M.bottomRightCorner<3, 3>() = p.I_M;
  return M;
}

/// Coriolis/centrifugal matrix.  Skew-symmetric by construction, so
/// d/dt(M) - 2C stays skew-symmetric for constant parameters.
inline Mat6 coriolis(const ModelParams& p, const Vec6& v) {
  const Vec3 V = v.head<3>();
  const Vec3 omega = v.tail<3>();
  Mat6 C = Mat6::Zero();
  C.topLeftCorner<3, 3>() = p.m * skew(omega);
  C.topRightCorner<3, 3>() = -p.m * skew(skew(omega) * p.rho);
  C.bottomLeftCorner<3, 3>() = -p.m * skew(skew(omega) * p.rho);
  C.bottomRightCorner<3, 3>() = -skew(p.I_M * omega) + p.m * skew(skew(V) * p.rho);
  return C;
}

/// Analytic Jacobian of the Coriolis force:  d(C(v) v)/dv.
inline Mat6 coriolis_force_jacobian(const ModelParams& p, const Vec6& v) {
  const Vec3 V = v.head<3>();
  const Vec3 omega = v.tail<3>();
  Mat6 Jc = Mat6::Zero();
  Jc.topLeftCorner<3, 3>() = p.m * skew(omega);
  Jc.topRightCorner<3, 3>() =
      -p.m * (skew(V) + skew(skew(omega) * p.rho) + skew(omega) * skew(p.rho));
  Jc.bottomLeftCorner<3, 3>() = p.m * skew(p.rho) * skew(omega);
  Jc.bottomRightCorner<3, 3>() =
      skew(omega) * p.I_M - skew(p.I_M * omega) - p.m * skew(p.rho) * skew(V);
  return Jc;
}

/// Gravitational generalized force G(eta).  Enters the applied force with a
/// negative sign: tau = tau0 - G + D v + B delta + f.
inline Vec6 gravity_vector(const ModelParams& p, const Vec3& eta2) {
  const double Phi = eta2(0), Theta = eta2(1);
  Vec3 W;
  W << -p.m * p.g * std::sin(Theta),
       p.m * p.g * std::cos(Theta) * std::sin(Phi),
       p.m * p.g * std::cos(Theta) * std::cos(Phi);
  Vec6 G;
  G.head<3>() = -W;
  G.tail<3>() = -skew(p.rho) * W;
  return G;
}

namespace detail {

inline Mat3 rot_x(double a) {
  Mat3 R;
  R << 1, 0, 0,
       0, std::cos(a), -std::sin(a),
       0, std::sin(a), std::cos(a);
  return R;
}
inline Mat3 rot_y(double a) {
  Mat3 R;
  R << std::cos(a), 0, std::sin(a),
       0, 1, 0,
       -std::sin(a), 0, std::cos(a);
  return R;
}
inline Mat3 rot_z(double a) {
  Mat3 R;
  R << std::cos(a), -std::sin(a), 0,
       std::sin(a), std::cos(a), 0,
       0, 0, 1;
  return R;
}
inline Mat3 drot_x(double a) {
  Mat3 R;
  R << 0, 0, 0,
       0, -std::sin(a), -std::cos(a),
       0, std::cos(a), -std::sin(a);
  return R;
}
inline Mat3 drot_y(double a) {
  Mat3 R;
  R << -std::sin(a), 0, std::cos(a),
       0, 0, 0,
       -std::cos(a), 0, -std::sin(a);
  return R;
}
inline Mat3 drot_z(double a) {
  Mat3 R;
  R << -std::sin(a), -std::cos(a), 0,
       std::cos(a), -std::sin(a), 0,
       0, 0, 0;
  return R;
}

inline void check_singularity(double Theta, double eps_sing) {
  if (std::abs(std::cos(Theta)) <= eps_sing)
    throw SingularityError("attitude within eps_sing of the Theta = +-pi/2 singularity");
}

}  // namespace detail

inline constexpr double kEpsSingularity = 1e-3;

/// Body-to-earth rotation for linear velocity (ZYX Euler sequence).
inline Mat3 euler_j1(const Vec3& eta2) {
  return detail::rot_z(eta2(2)) * detail::rot_y(eta2(1)) * detail::rot_x(eta2(0));
}

/// Body angular rate to Euler angle rate map.  Throws SingularityError near
/// cos(Theta) = 0.
inline Mat3 euler_j2(const Vec3& eta2, double eps_sing = kEpsSingularity) {
  const double Phi = eta2(0), Theta = eta2(1);
  detail::check_singularity(Theta, eps_sing);
  const double sF = std::sin(Phi), cF = std::cos(Phi);
  const double tT = std::tan(Theta), cT = std::cos(Theta);
  Mat3 J2;
  J2 << 1, sF * tT, cF * tT,
        0, cF, -sF,
        0, sF / cT, cF / cT;
  return J2;
}

/// Closed-form inverse of euler_j2 (well defined for every attitude).
inline Mat3 euler_j2_inv(const Vec3& eta2) {
  const double Phi = eta2(0), Theta = eta2(1);
  const double sF = std::sin(Phi), cF = std::cos(Phi);
  const double sT = std::sin(Theta), cT = std::cos(Theta);
  Mat3 J2i;
  J2i << 1, 0, -sT,
         0, cF, cT * sF,
         0, -sF, cT * cF;
  return J2i;
}

/// Full Euler transformation:  etadot = J(eta2) v.
inline Mat6 euler_transform(const Vec3& eta2, double eps_sing = kEpsSingularity) {
  Mat6 J = Mat6::Zero();
  J.topLeftCorner<3, 3>() = euler_j1(eta2);
  J.bottomRightCorner<3, 3>() = euler_j2(eta2, eps_sing);
  return J;
}

/// Closed-form inverse of euler_transform; J1 is orthonormal and J2 has an
/// explicit inverse, so no numeric inversion is involved.
inline Mat6 euler_transform_inverse(const Vec3& eta2, double eps_sing = kEpsSingularity) {
  detail::check_singularity(eta2(1), eps_sing);
  Mat6 Ji = Mat6::Zero();
  Ji.topLeftCorner<3, 3>() = euler_j1(eta2).transpose();
  Ji.bottomRightCorner<3, 3>() = euler_j2_inv(eta2);
  return Ji;
}

/// Analytic time derivative of the Euler transformation given the Euler angle
/// rates eta2dot = [Phidot Thetadot Psidot]'.
inline Mat6 euler_transform_dot(const Vec3& eta2, const Vec3& eta2dot,
                                double eps_sing = kEpsSingularity) {
  using namespace detail;
  const double Phi = eta2(0), Theta = eta2(1), Psi = eta2(2);
  check_singularity(Theta, eps_sing);

  const Mat3 Rx = rot_x(Phi), Ry = rot_y(Theta), Rz = rot_z(Psi);
  const Mat3 dJ1 = rot_z(Psi) * rot_y(Theta) * drot_x(Phi) * eta2dot(0) +
                   rot_z(Psi) * drot_y(Theta) * Rx * eta2dot(1) +
                   drot_z(Psi) * Ry * Rx * eta2dot(2);

  const double sF = std::sin(Phi), cF = std::cos(Phi);
  const double sT = std::sin(Theta), cT = std::cos(Theta), tT = std::tan(Theta);
  const double cT2 = cT * cT;
  Mat3 dJ2_dPhi, dJ2_dTheta;
  dJ2_dPhi << 0, cF * tT, -sF * tT,
              0, -sF, -cF,
              0, cF / cT, -sF / cT;
  dJ2_dTheta << 0, sF / cT2, cF / cT2,
                0, 0, 0,
                0, sF * sT / cT2, cF * sT / cT2;
  const Mat3 dJ2 = dJ2_dPhi * eta2dot(0) + dJ2_dTheta * eta2dot(1);

  Mat6 Jd = Mat6::Zero();
  Jd.topLeftCorner<3, 3>() = dJ1;
  Jd.bottomRightCorner<3, 3>() = dJ2;
  return Jd;
}

/// Effective damping map after applying the uncertainty scaling.
inline Mat6 effective_damping(const ModelParams& p, const UncertaintySpec& unc) {
  return p.D.cwiseProduct(unc.d_scale);
}

/// Effective effector map after applying the uncertainty scaling.
inline Mat64 effective_effector(const ModelParams& p, const UncertaintySpec& unc) {
  return p.B_eff.cwiseProduct(unc.b_scale);
}

/// Applied generalized force:
///   tau = tau0 - G(eta) + D v + B delta + f(v, delta).
inline Vec6 generalized_force(const ModelParams& p, const UncertaintySpec& unc,
                              const Vec6& v, const Vec3& eta2, const Vec4& delta) {
  return p.tau0 - gravity_vector(p, eta2) + effective_damping(p, unc) * v +
         effective_effector(p, unc) * delta + unc.f_add.eval(v, delta);
}

/// Body acceleration:  vdot = M^{-1} (tau - C(v) v).
inline Vec6 body_derivative(const ModelParams& p, const UncertaintySpec& unc,
                            const Vec6& v, const Vec3& eta2, const Vec4& delta) {
  const Vec6 tau = generalized_force(p, unc, v, eta2, delta);
  const Vec6 rhs = tau - coriolis(p, v) * v;
  return mass_inertia(p).ldlt().solve(rhs);
}

/// Kinematics:  etadot = J(eta2) v.
inline Vec6 kinematics(const Vec3& eta2, const Vec6& v,
                       double eps_sing = kEpsSingularity) {
  return euler_transform(eta2, eps_sing) * v;
}

/// Generalized momentum L = M v.
inline Vec6 momentum_of(const ModelParams& p, const Vec6& v) {
  return mass_inertia(p) * v;
}

/// One explicit-trapezoid (Heun) step of the momentum transport ODE
///   Ldot = g(t) - S*(omega(t)) L
/// given the forcing and body rates at both interval endpoints.  Used for the
/// reference momentum (g = tau_d) and the pseudo-observer (g = M vdot + C v).
/// Exact for constant forcing with omega = 0, second order otherwise.
inline Vec6 momentum_ode_step(const Vec6& L, const Vec6& g1, const Vec3& omega1,
                              const Vec6& g2, const Vec3& omega2, double dt) {
  const Vec6 k1 = g1 - skew_star(omega1) * L;
  const Vec6 Lp = L + dt * k1;
  const Vec6 k2 = g2 - skew_star(omega2) * Lp;
  return L + 0.5 * dt * (k1 + k2);
}

/// Continuous-time linear model  xdot = A x + B u  about a trim point.
struct LinearModel {
  Mat6 A;
  Mat64 B;
};

/// Jacobian of the angular coupling force  d(S*(omega) L(v))/dv with L = M v.
inline Mat6 skew_star_force_jacobian(const ModelParams& p, const Vec6& v0) {
  const Vec3 omega0 = v0.tail<3>();
  const Vec6 L0 = momentum_of(p, v0);
  Mat6 Jw = Mat6::Zero();
  Jw.topRightCorner<3, 3>() = -skew(L0.head<3>());
  Jw.bottomRightCorner<3, 3>() = -skew(L0.tail<3>());
  return skew_star(omega0) * mass_inertia(p) + Jw;
}

/// Linearized velocity dynamics about (v0, delta0):
///   A = M^{-1} (D + df/dv - d(Cv)/dv),  B = M^{-1} (B_eff + df/ddelta).
inline LinearModel linearize_velocity(const ModelParams& p, const UncertaintySpec& unc,
                                      const Vec6& v0, const Vec4& delta0) {
  const Mat6 M = mass_inertia(p);
  const auto Mldlt = M.ldlt();
  const Mat6 Dv = effective_damping(p, unc) + unc.f_add.dv(v0) -
                  coriolis_force_jacobian(p, v0);
  LinearModel lm;
  lm.A = Mldlt.solve(Dv);
  lm.B = Mldlt.solve(Mat64(effective_effector(p, unc) + unc.f_add.ddelta()));
  (void)delta0;  // f is affine in delta, so the point does not enter
  return lm;
}

/// Linearized momentum dynamics about (v0, delta0):
///   dL/dt = A dL + B ddelta,
///   A = (D + df/dv - d(S*(omega) L)/dv) M^{-1},  B = B_eff + df/ddelta,
/// where the S* Jacobian carries both the omega channel and the -S*(omega0)
/// drift term (they coincide after the M^{-1} change of coordinates).
inline LinearModel linearize_momentum(const ModelParams& p, const UncertaintySpec& unc,
                                      const Vec6& v0, const Vec4& delta0) {
  const Mat6 M = mass_inertia(p);
  const Mat6 ALv = effective_damping(p, unc) + unc.f_add.dv(v0) -
                   skew_star_force_jacobian(p, v0);
  LinearModel lm;
  lm.A = M.transpose().ldlt().solve(ALv.transpose()).transpose();
  lm.B = effective_effector(p, unc) + unc.f_add.ddelta();
  (void)delta0;
  return lm;
}

/// Level or climbing straight-flight equilibrium of the nominal model.
struct TrimPoint {
  Vec6 v0 = Vec6::Zero();
  Vec6 eta0 = Vec6::Zero();
  Vec4 delta0 = Vec4::Zero();
  double alpha = 0.0;  // angle of attack
  double gamma = 0.0;  // flight-path angle; Theta0 = alpha + gamma
};

namespace detail {

inline Vec6 trim_residual(const ModelParams& p, double airspeed, double gamma,
                          const Vec4& delta, double alpha) {
  Vec6 v0 = Vec6::Zero();
  v0(0) = airspeed * std::cos(alpha);
  v0(2) = airspeed * std::sin(alpha);
  Vec3 eta2(0.0, alpha + gamma, 0.0);
  // omega = 0 makes C(v0) v0 vanish, so the force balance is the whole story.
  return generalized_force(p, UncertaintySpec{}, v0, eta2, delta);
}

}  // namespace detail

/// Finds straight-flight trim (delta0, Theta0) at fixed airspeed and flight
/// path angle by damped Gauss-Newton over (delta, alpha) with
/// Theta = alpha + gamma.  Throws SolverError if the residual cannot be
/// brought below tol.
inline TrimPoint trim_solve(const ModelParams& p, double airspeed,
                            double gamma = 0.0,
                            const Vec4& delta_guess = Vec4::Zero(),
                            int max_iter = 100, double tol = 1e-10) {
  Eigen::Matrix<double, 5, 1> x;
  x.head<4>() = delta_guess;
  x(4) = 0.0;

  auto residual = [&](const Eigen::Matrix<double, 5, 1>& xx) {
    return detail::trim_residual(p, airspeed, gamma, xx.head<4>(), xx(4));
  };

  Vec6 r = residual(x);
  for (int it = 0; it < max_iter; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= tol) break;

    Eigen::Matrix<double, 6, 5> Jx;
    for (int j = 0; j < 5; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(j)));
      auto xp = x;
      xp(j) += h;
      Jx.col(j) = (residual(xp) - r) / h;
    }
    Eigen::Matrix<double, 5, 1> step =
        Jx.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-r);

    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      auto xn = x + lambda * step;
      Vec6 rn = residual(xn);
      if (rn.norm() < r.norm()) {
        x = xn;
        r = rn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }

  if (r.lpNorm<Eigen::Infinity>() > tol)
    throw SolverError("trim_solve: residual " + std::to_string(r.lpNorm<Eigen::Infinity>()) +
                      " above tolerance; no straight-flight equilibrium found");

  TrimPoint tp;
  tp.alpha = x(4);
  tp.gamma = gamma;
  tp.delta0 = clamp_delta(x.head<4>(), p);
  if ((tp.delta0 - x.head<4>()).cwiseAbs().maxCoeff() > 0.0)
    throw SolverError("trim_solve: equilibrium requires effectors outside their bounds");
  tp.v0 = Vec6::Zero();
  tp.v0(0) = airspeed * std::cos(tp.alpha);
  tp.v0(2) = airspeed * std::sin(tp.alpha);
  tp.eta0 = Vec6::Zero();
  tp.eta0(4) = tp.alpha + gamma;
  return tp;
}

}  // namespace sdac
