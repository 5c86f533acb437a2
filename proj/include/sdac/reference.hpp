#pragma once

// Reference trajectory generators for the closed-loop scenarios.  Every
// reference supplies eta_d, etadot_d and etaddot_d so the tracking controller
// can form its feedforward terms; profiles are C^3 in time so the commanded
// accelerations stay bounded and smooth.

#include "sdac/dynamics.hpp"
#include "sdac/types.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace sdac {

struct ReferenceSample {
  Vec6 eta = Vec6::Zero();
  Vec6 eta_dot = Vec6::Zero();
  Vec6 eta_ddot = Vec6::Zero();
};

class Reference {
 public:
  virtual ~Reference() = default;
  virtual ReferenceSample at(double t) const = 0;
};

namespace detail {

// Septic smoothstep 35u^4 - 84u^5 + 70u^6 - 20u^7 and its first three
// derivatives; value and derivatives through third order vanish at u = 0 and
// match the constant extension at u = 1.
struct C3Step {
  double s = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

inline C3Step c3_step(double u) {
  C3Step r;
  if (u <= 0.0) return r;
  if (u >= 1.0) {
    r.s = 1.0;
    return r;
  }
  const double u2 = u * u, u3 = u2 * u;
  const double w = 1.0 - u, w2 = w * w, w3 = w2 * w;
  r.s = u3 * u * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u3);
  r.d1 = 140.0 * u3 * w3;
  r.d2 = 420.0 * u2 * w2 * (1.0 - 2.0 * u);
  r.d3 = 840.0 * u * w * (1.0 - 5.0 * u + 5.0 * u2);
  return r;
}

// amp * c3_step((t - t0) / T) with time-scaled derivatives.
struct Ramp {
  double t0 = 0.0;
  double T = 1.0;
  double amp = 0.0;

  C3Step at(double t) const {
    C3Step r = c3_step((t - t0) / T);
    r.s *= amp;
    r.d1 *= amp / T;
    r.d2 *= amp / (T * T);
    r.d3 *= amp / (T * T * T);
    return r;
  }
};

}  // namespace detail

/// Holds the trim condition: constant attitude, position advancing at the
/// trim velocity.
class TrimHoldReference : public Reference {
 public:
  explicit TrimHoldReference(const TrimPoint& trim)
      : eta0_(trim.eta0),
        etadot0_(euler_transform(Vec3(trim.eta0.tail<3>())) * trim.v0) {}

  ReferenceSample at(double t) const override {
    ReferenceSample rs;
    rs.eta = eta0_ + t * etadot0_;
    rs.eta_dot = etadot0_;
    return rs;
  }

 private:
  Vec6 eta0_;
  Vec6 etadot0_;
};

/// Parameter block for building a reference from a configuration file.
struct ReferenceSpec {
  enum class Type { trim_hold, climb_turn };
  Type type = Type::climb_turn;
  double speed = 120.0;         // path speed; also the trim airspeed
  double t_start = 2.0;         // maneuver onset
  double turn_duration = 6.0;   // heading ramp length
  double psi_total = 0.25;      // total heading change (rad)
  double climb_duration = 3.0;  // each half of the climb profile
  double gamma_max = 0.04;      // peak flight-path angle (rad)
};

/// Coordinated climb-and-turn maneuver at constant path speed.  Heading and
/// flight-path angle follow C^3 ramps; the bank angle is the coordinated-turn
/// value atan(V psidot cos(gamma) / g) so the lateral force request stays
/// small; pitch is angle of attack plus flight-path angle.  Positions come
/// from per-interval Simpson quadrature of the analytic path velocity with
/// cubic Hermite interpolation between the stored nodes.
class ClimbTurnReference : public Reference {
 public:
  ClimbTurnReference(const ReferenceSpec& spec, const TrimPoint& trim, double g,
                     double t_max)
      : V_(spec.speed),
        g_(g),
        alpha_(trim.alpha),
        psi_(detail::Ramp{spec.t_start, spec.turn_duration, spec.psi_total}),
        climb_up_(detail::Ramp{spec.t_start, spec.climb_duration, spec.gamma_max}),
        climb_down_(detail::Ramp{spec.t_start + spec.climb_duration,
                                 spec.climb_duration, spec.gamma_max}),
        pos0_(trim.eta0.head<3>()),
        psi0_(trim.eta0(5)) {
    if (!(t_max > 0.0) || !(V_ > 0.0) || !(g_ > 0.0))
      throw ParameterError("ClimbTurnReference: t_max, speed and g must be positive");
    build_table(t_max);
  }

  ReferenceSample at(double t) const override {
    const detail::C3Step psi = psi_.at(t);
    const double Psi = psi0_ + psi.s;
    const detail::C3Step gu = climb_up_.at(t);
    const detail::C3Step gd = climb_down_.at(t);
    const double gam = gu.s - gd.s;
    const double gam1 = gu.d1 - gd.d1;
    const double gam2 = gu.d2 - gd.d2;

    // coordinated bank from the horizontal turn rate
    const double w = V_ * psi.d1 * std::cos(gam) / g_;
    const double w1 = V_ * (psi.d2 * std::cos(gam) - psi.d1 * gam1 * std::sin(gam)) / g_;
    const double w2 = V_ *
                      (psi.d3 * std::cos(gam) - 2.0 * psi.d2 * gam1 * std::sin(gam) -
                       psi.d1 * gam2 * std::sin(gam) -
                       psi.d1 * gam1 * gam1 * std::cos(gam)) /
                      g_;
    const double den = 1.0 + w * w;
    const double Phi = std::atan(w);
    const double Phi1 = w1 / den;
    const double Phi2 = w2 / den - 2.0 * w * w1 * w1 / (den * den);

    ReferenceSample rs;
    rs.eta.head<3>() = position(t);
    rs.eta(3) = Phi;
    rs.eta(4) = alpha_ + gam;
    rs.eta(5) = Psi;
    rs.eta_dot.head<3>() = path_velocity(t);
    rs.eta_dot(3) = Phi1;
    rs.eta_dot(4) = gam1;
    rs.eta_dot(5) = psi.d1;
    rs.eta_ddot.head<3>() = path_acceleration(t);
    rs.eta_ddot(3) = Phi2;
    rs.eta_ddot(4) = gam2;
    rs.eta_ddot(5) = psi.d2;
    return rs;
  }

 private:
  Vec3 path_velocity(double t) const {
    const double Psi = psi0_ + psi_.at(t).s;
    const double gam = climb_up_.at(t).s - climb_down_.at(t).s;
    Vec3 f;
    f << V_ * std::cos(gam) * std::cos(Psi),
         V_ * std::cos(gam) * std::sin(Psi),
         -V_ * std::sin(gam);
    return f;
  }

  Vec3 path_acceleration(double t) const {
    const detail::C3Step psi = psi_.at(t);
    const double Psi = psi0_ + psi.s;
    const double gam = climb_up_.at(t).s - climb_down_.at(t).s;
    const double gam1 = climb_up_.at(t).d1 - climb_down_.at(t).d1;
    Vec3 a;
    a << -V_ * (gam1 * std::sin(gam) * std::cos(Psi) +
                psi.d1 * std::cos(gam) * std::sin(Psi)),
         V_ * (-gam1 * std::sin(gam) * std::sin(Psi) +
               psi.d1 * std::cos(gam) * std::cos(Psi)),
         -V_ * gam1 * std::cos(gam);
    return a;
  }

  void build_table(double t_max) {
    n_ = static_cast<int>(std::ceil(t_max / kTableStep)) + 1;
    table_.resize(n_);
    table_[0] = pos0_;
    for (int k = 0; k + 1 < n_; ++k) {
      const double a = k * kTableStep;
      const double b = a + kTableStep;
      const Vec3 inc = (kTableStep / 6.0) *
                       (path_velocity(a) + 4.0 * path_velocity(0.5 * (a + b)) +
                        path_velocity(b));
      table_[k + 1] = table_[k] + inc;
    }
  }

  Vec3 position(double t) const {
    const double tc = std::min(std::max(t, 0.0), (n_ - 1) * kTableStep);
    int k = static_cast<int>(tc / kTableStep);
    if (k > n_ - 2) k = n_ - 2;
    const double u = (tc - k * kTableStep) / kTableStep;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    const Vec3 m0 = path_velocity(k * kTableStep);
    const Vec3 m1 = path_velocity((k + 1) * kTableStep);
    return h00 * table_[k] + h01 * table_[k + 1] +
           kTableStep * (h10 * m0 + h11 * m1);
  }

  static constexpr double kTableStep = 5e-4;

  double V_, g_, alpha_;
  detail::Ramp psi_, climb_up_, climb_down_;
  Vec3 pos0_;
  double psi0_;
  std::vector<Vec3> table_;
  int n_ = 0;
};

/// Factory used by the scenario runner.  t_max bounds the quadrature table of
/// the climb-turn profile; requests beyond it clamp to the final position.
inline std::shared_ptr<const Reference> build_reference(const ReferenceSpec& spec,
                                                        const TrimPoint& trim,
                                                        double g, double t_max) {
  switch (spec.type) {
    case ReferenceSpec::Type::trim_hold:
      return std::make_shared<TrimHoldReference>(trim);
    case ReferenceSpec::Type::climb_turn:
      return std::make_shared<ClimbTurnReference>(spec, trim, g, t_max);
  }
  throw ConfigError("build_reference: unknown reference type");
}

}  // namespace sdac
