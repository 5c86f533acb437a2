#pragma once

// Common fixed-size linear algebra aliases, the rigid-body parameter set and
// the error hierarchy shared by every sdac header.

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdac {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat64 = Eigen::Matrix<double, 6, 4>;
using Mat46 = Eigen::Matrix<double, 4, 6>;
using MatX = Eigen::MatrixXd;

/// Base class for all library errors.
class SdacError : public std::runtime_error {
 public:
  explicit SdacError(const std::string& what) : std::runtime_error(what) {}
};

/// Attitude too close to the Theta = +-pi/2 kinematic singularity.
class SingularityError : public SdacError {
 public:
  explicit SingularityError(const std::string& what) : SdacError(what) {}
};

/// Physically inconsistent model parameters.
class ParameterError : public SdacError {
 public:
  explicit ParameterError(const std::string& what) : SdacError(what) {}
};

/// Iterative solver failed to reach its tolerance.
class SolverError : public SdacError {
 public:
  explicit SolverError(const std::string& what) : SdacError(what) {}
};

/// Malformed or incomplete configuration input.
class ConfigError : public SdacError {
 public:
  explicit ConfigError(const std::string& what) : SdacError(what) {}
};

/// State left the valid domain during numerical integration.
class IntegrationError : public SdacError {
 public:
  explicit IntegrationError(const std::string& what) : SdacError(what) {}
};

/// Additive force term  f(v, delta) = f0 + Fv v + Fd delta + Fq (v .* v).
/// Used to model effects beyond linear damping and the effector map; the
/// quadratic part keeps the Jacobians analytic.
struct AdditiveForce {
  Vec6 f0 = Vec6::Zero();
  Mat6 Fv = Mat6::Zero();
  Mat64 Fd = Mat64::Zero();
  Mat6 Fq = Mat6::Zero();

  Vec6 eval(const Vec6& v, const Vec4& delta) const {
    return f0 + Fv * v + Fd * delta + Fq * v.cwiseProduct(v).matrix();
  }
  Mat6 dv(const Vec6& v) const {
    return Fv + Fq * (2.0 * v).asDiagonal();
  }
  const Mat64& ddelta() const { return Fd; }
};

/// Multiplicative perturbation applied to the true plant while the controller
/// keeps using the nominal matrices.  All-ones scales and zero add = nominal.
struct UncertaintySpec {
  Mat6 d_scale = Mat6::Ones();    // elementwise on D
  Mat64 b_scale = Mat64::Ones();  // elementwise on B
  AdditiveForce f_add;            // extra force on the true plant

  bool is_identity() const {
    return (d_scale.array() == 1.0).all() && (b_scale.array() == 1.0).all() &&
           f_add.f0.isZero(0.0) && f_add.Fv.isZero(0.0) &&
           f_add.Fd.isZero(0.0) && f_add.Fq.isZero(0.0);
  }
};

/// Rigid-body and actuation parameters.  Units follow the US customary
/// aeronautics convention (slug, ft, s, lbf) but nothing depends on that
/// choice as long as the set is consistent.
struct ModelParams {
  double m = 1.0;              // mass
  Mat3 I_M = Mat3::Identity(); // inertia about the body origin
  Vec3 rho = Vec3::Zero();     // c.g. offset from body origin
  double g = 32.174;           // gravitational acceleration

  Mat6 D = Mat6::Zero();       // linear damping map, force = D v
  Mat64 B_eff = Mat64::Zero(); // effector map, force = B_eff delta
  Vec6 tau0 = Vec6::Zero();    // constant trim offset force

  Vec4 delta_min = Vec4::Constant(-1.0);
  Vec4 delta_max = Vec4::Constant(1.0);

  /// Throws ParameterError unless the set is physically consistent:
  /// m > 0, I_M symmetric positive definite, sym(D) negative semidefinite,
  /// and elementwise delta_min < delta_max.
  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m))
      throw ParameterError("mass must be positive and finite");
    if (!(g >= 0.0) || !std::isfinite(g))
      throw ParameterError("gravity must be non-negative and finite");
    if ((I_M - I_M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + I_M.cwiseAbs().maxCoeff()))
      throw ParameterError("inertia matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat3> es(I_M);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
      throw ParameterError("inertia matrix must be positive definite");
    Mat6 Dsym = 0.5 * (D + D.transpose());
    Eigen::SelfAdjointEigenSolver<Mat6> ds(Dsym);
    if (ds.info() != Eigen::Success)
      throw ParameterError("damping symmetrization failed to diagonalize");
    if (ds.eigenvalues().maxCoeff() > 1e-9 * (1.0 + D.cwiseAbs().maxCoeff()))
      throw ParameterError("sym(D) must be negative semidefinite");
    for (int j = 0; j < 4; ++j) {
      if (!(delta_min(j) < delta_max(j)))
        throw ParameterError("effector bounds must satisfy delta_min < delta_max");
    }
    if (!D.allFinite() || !B_eff.allFinite() || !tau0.allFinite() || !rho.allFinite())
      throw ParameterError("model matrices must be finite");
  }
};

/// Clamp an effector command into the box [delta_min, delta_max].
inline Vec4 clamp_delta(const Vec4& delta, const ModelParams& p) {
  return delta.cwiseMax(p.delta_min).cwiseMin(p.delta_max);
}

/// Sub-scale fixed-wing parameter set used by the default scenarios and most
/// tests.  Effectors: throttle [0,1], rudder, aileron, elevator (rad).
/// Control-surface force derivatives are neglected (surfaces act as pure
/// moment generators), the usual transport-aircraft simplification; without
/// it a least-squares allocation of cg-force requests turns the surface
/// moments into positive position-error feedback.  tau0 is chosen so that
/// straight level flight at 120 ft/s with delta = (0.4, 0, 0, -0.03) is an
/// exact equilibrium.
inline ModelParams default_model_params() {
  ModelParams p;
  p.m = 1.5425;
  p.I_M << 1.3273, 0.0, -0.1200,
           0.0, 4.2540, 0.0,
           -0.1200, 0.0, 5.4540;
  p.rho = Vec3::Zero();
  p.g = 32.174;

  p.D = Mat6::Zero();
  p.D(0, 0) = -0.28;
  p.D(1, 1) = -0.90;
  p.D(1, 5) = 1.20;   // side force from yaw rate
  p.D(2, 2) = -4.00;
  p.D(2, 4) = -3.00;  // heave force from pitch rate
  p.D(3, 1) = -0.50;  // dihedral
  p.D(3, 3) = -6.00;
  p.D(3, 5) = 1.50;
  p.D(4, 2) = -1.20;  // static pitch stiffness against heave
  p.D(4, 4) = -8.00;
  p.D(5, 1) = 0.60;   // weathercock
  p.D(5, 3) = -0.50;
  p.D(5, 5) = -2.50;

  p.B_eff = Mat64::Zero();
  p.B_eff.col(0) << 22.0, 0.0, 0.0, 0.0, 0.5, 0.0;   // throttle
  p.B_eff.col(1) << 0.0, 0.0, 0.0, 0.8, 0.0, -14.0;  // rudder
  p.B_eff.col(2) << 0.0, 0.0, 0.0, 10.0, 0.0, -0.9;  // aileron
  p.B_eff.col(3) << 0.0, 0.0, 0.0, 0.0, -12.0, 0.0;  // elevator

  p.delta_min << 0.0, -0.52, -0.44, -0.44;
  p.delta_max << 1.0, 0.52, 0.44, 0.44;

  // tau0 = G(eta0) - D v0 - B delta0 at v0 = (120,0,0,0,0,0), level attitude.
  const double V0 = 120.0;
  Vec6 v0 = Vec6::Zero();
  v0(0) = V0;
  Vec4 delta0;
  delta0 << 0.4, 0.0, 0.0, -0.03;
  Vec6 G0 = Vec6::Zero();
  G0(2) = -p.m * p.g;  // G(eta) at level attitude; enters the force as -G
  p.tau0 = G0 - p.D * v0 - p.B_eff * delta0;
  return p;
}

}  // namespace sdac
