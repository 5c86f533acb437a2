#pragma once

// Earth-frame dynamics and the robust sliding-mode tracking controller for
// the exactly known part of the model.  The controller output is a desired
// generalized force tau_d in body coordinates; downstream it is converted
// into a reference momentum and allocated to the effectors.

#include "sdac/dynamics.hpp"
#include "sdac/types.hpp"

#include <cmath>

namespace sdac {

/// Sliding-mode controller gains.  lambda and gamma are the diagonals of the
/// error and sliding gain matrices; chi bounds the disturbance force the
/// robust term can reject; eps is the tanh boundary-layer width.
struct SmcGains {
  Vec6 lambda_diag = Vec6::Constant(0.8);
  Vec6 gamma_diag = Vec6::Constant(3.0);
  double chi = 0.5;
  double eps = 0.05;

  void validate() const {
    if (lambda_diag.minCoeff() <= 0.0 || gamma_diag.minCoeff() <= 0.0)
      throw ParameterError("SMC gain diagonals must be positive");
    if (chi < 0.0) throw ParameterError("chi must be non-negative");
    if (!(eps > 0.0)) throw ParameterError("boundary layer eps must be positive");
  }
};

/// Earth-frame mass matrix  M_eta = J^{-T} M J^{-1}.
inline Mat6 earth_mass(const ModelParams& p, const Vec3& eta2,
                       double eps_sing = kEpsSingularity) {
  const Mat6 Ji = euler_transform_inverse(eta2, eps_sing);
  return Ji.transpose() * mass_inertia(p) * Ji;
}

/// Earth-frame Coriolis matrix  C_eta = J^{-T} (C - M J^{-1} Jdot) J^{-1}.
/// The attitude rate needed for Jdot comes from the state itself.
inline Mat6 earth_coriolis(const ModelParams& p, const Vec6& v, const Vec3& eta2,
                           double eps_sing = kEpsSingularity) {
  const Mat6 Ji = euler_transform_inverse(eta2, eps_sing);
  const Vec3 eta2dot = euler_j2(eta2, eps_sing) * v.tail<3>();
  const Mat6 Jd = euler_transform_dot(eta2, eta2dot, eps_sing);
  const Mat6 M = mass_inertia(p);
  return Ji.transpose() * (coriolis(p, v) - M * Ji * Jd) * Ji;
}

/// Analytic time derivative of the earth-frame mass matrix,
///   d(M_eta)/dt = -(J^{-T} Jdot') M_eta - M_eta (Jdot J^{-1}).
inline Mat6 earth_mass_rate(const ModelParams& p, const Vec3& eta2,
                            const Vec3& eta2dot, double eps_sing = kEpsSingularity) {
  const Mat6 Ji = euler_transform_inverse(eta2, eps_sing);
  const Mat6 Jd = euler_transform_dot(eta2, eta2dot, eps_sing);
  const Mat6 Me = Ji.transpose() * mass_inertia(p) * Ji;
  const Mat6 JdJi = Jd * Ji;
  return -JdJi.transpose() * Me - Me * JdJi;
}

/// Controller output: body-frame desired force, the sliding variable, the
/// robust term and the Lyapunov value V = 0.5 s' M_eta s.
struct SmcOutput {
  Vec6 tau_d = Vec6::Zero();
  Vec6 s = Vec6::Zero();
  Vec6 u0 = Vec6::Zero();
  double V = 0.0;
};

/// Sliding-mode tracking law in the earth frame, mapped back to body forces:
///   tau_d = J' (M_eta thetadot + C_eta theta - Gamma s + u0),
///   theta = etadot_d - Lambda (eta - eta_d),  s = etadot - theta,
///   u0 = -chi tanh(s / eps).
inline SmcOutput smc_force(const ModelParams& p, const SmcGains& g, const Vec6& v,
                           const Vec6& eta, const Vec6& eta_d, const Vec6& etadot_d,
                           const Vec6& etaddot_d, double eps_sing = kEpsSingularity) {
  const Vec3 eta2 = eta.tail<3>();
  const Mat6 J = euler_transform(eta2, eps_sing);
  const Vec6 etadot = J * v;

  const Vec6 err = eta - eta_d;
  const Vec6 errdot = etadot - etadot_d;
  const Vec6 theta = etadot_d - g.lambda_diag.cwiseProduct(err);
  const Vec6 thetadot = etaddot_d - g.lambda_diag.cwiseProduct(errdot);

  SmcOutput out;
  out.s = etadot - theta;
  out.u0 = -g.chi * (out.s / g.eps).array().tanh().matrix();

  const Mat6 Me = earth_mass(p, eta2, eps_sing);
  const Mat6 Ce = earth_coriolis(p, v, eta2, eps_sing);
  const Vec6 tau_eta =
      Me * thetadot + Ce * theta - g.gamma_diag.cwiseProduct(out.s) + out.u0;
  out.tau_d = J.transpose() * tau_eta;
  out.V = 0.5 * out.s.dot(Me * out.s);
  return out;
}

/// Exponential decay rate of the sliding Lyapunov function,
///   V(t) <= V(0) exp(-rate t),  rate = 2 lambda_min(Gamma) / lambda_max(M).
inline double smc_decay_rate(const ModelParams& p, const SmcGains& g) {
  Eigen::SelfAdjointEigenSolver<Mat6> es(mass_inertia(p));
  return 2.0 * g.gamma_diag.minCoeff() / es.eigenvalues().maxCoeff();
}

/// Advance the reference momentum one step:  Ldot_d = tau_d - S*(omega) L_d.
/// Endpoint forcing follows the explicit-trapezoid rule of momentum_ode_step.
inline Vec6 reference_momentum_step(const Vec6& L_d, const Vec6& tau_d1,
                                    const Vec3& omega1, const Vec6& tau_d2,
                                    const Vec3& omega2, double dt) {
  return momentum_ode_step(L_d, tau_d1, omega1, tau_d2, omega2, dt);
}

}  // namespace sdac
