#include "sdac/analysis.hpp"

#include "sdac/lqr.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sdac;

TEST_CASE("controllability rank on structured cases") {
  SECTION("zero A keeps only the B columns") {
    Mat64 B = Mat64::Zero();
    B.topRows<4>() = Mat4::Identity();
    const ControllabilityResult r = controllability(Mat6::Zero(), B);
    REQUIRE(r.rank == 4);
    REQUIRE_FALSE(r.controllable);
  }

  SECTION("Jordan shift chain reached from the last state") {
    Mat6 A = Mat6::Zero();
    for (int i = 0; i < 5; ++i) A(i, i + 1) = 1.0;  // shift
    Mat64 B = Mat64::Zero();
    B(5, 0) = 1.0;
    const ControllabilityResult r = controllability(A, B);
    REQUIRE(r.rank == 6);
    REQUIRE(r.controllable);
  }

  SECTION("random dense pairs are controllable") {
    for (int trial = 0; trial < 10; ++trial) {
      const Mat6 A = Mat6::Random();
      const Mat64 B = Mat64::Random();
      REQUIRE(controllability(A, B).controllable);
    }
  }
}

TEST_CASE("PBH stabilizability hand cases") {
  // unstable mode with no input authority
  Mat6 A = 0.5 * Mat6::Identity();
  A(1, 1) = 2.0;
  Mat64 B = Mat64::Zero();
  B(0, 0) = 1.0;  // only the stable state 0 is driven
  REQUIRE_FALSE(stabilizability(A, B));

  // same spectrum, but the input now reaches the unstable mode
  Mat64 B2 = Mat64::Zero();
  B2(1, 0) = 1.0;
  REQUIRE(stabilizability(A, B2));

  // uncontrollable but stable modes are acceptable
  Mat6 As = 0.5 * Mat6::Identity();
  Mat64 Bs = Mat64::Zero();
  REQUIRE(stabilizability(As, Bs));

  // marginally stable (|lambda| = 1) uncontrollable mode counts as failure
  Mat6 Am = 0.5 * Mat6::Identity();
  Am(3, 3) = 1.0;
  REQUIRE_FALSE(stabilizability(Am, Mat64::Zero()));
}

TEST_CASE("controllable implies stabilizable") {
  for (int trial = 0; trial < 10; ++trial) {
    const Mat6 A = 2.0 * Mat6::Random();  // mostly unstable spectra
    const Mat64 B = Mat64::Random();
    if (controllability(A, B).controllable) REQUIRE(stabilizability(A, B));
  }
}

TEST_CASE("bounded least squares matches the unconstrained optimum inside the box") {
  for (int trial = 0; trial < 10; ++trial) {
    const Mat64 B = Mat64::Random() + Mat64::Identity() * 0.0;
    const Vec4 u_true = oracles::uniform_vec<4>(-0.3, 0.3);
    const Vec6 b = B * u_true;  // exactly attainable, interior optimum
    const Vec4 lo = Vec4::Constant(-1.0);
    const Vec4 hi = Vec4::Constant(1.0);
    const Vec4 u = bounded_least_squares(B, b, lo, hi);
    REQUIRE((u - u_true).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("bounded least squares satisfies the KKT conditions on active bounds") {
  for (int trial = 0; trial < 20; ++trial) {
    const Mat64 B = Mat64::Random();
    const Vec6 b = 3.0 * Vec6(oracles::uniform_vec<6>(-1.0, 1.0));
    const Vec4 lo = Vec4::Constant(-0.4);
    const Vec4 hi = Vec4::Constant(0.4);
    const Vec4 u = bounded_least_squares(B, b, lo, hi);

    REQUIRE((u.array() >= lo.array() - 1e-12).all());
    REQUIRE((u.array() <= hi.array() + 1e-12).all());

    const Vec4 grad = B.transpose() * (B * u - b);
    for (int j = 0; j < 4; ++j) {
      if (u(j) > lo(j) + 1e-9 && u(j) < hi(j) - 1e-9) {
        REQUIRE(std::abs(grad(j)) < 1e-8);   // interior: stationarity
      } else if (u(j) <= lo(j) + 1e-9) {
        REQUIRE(grad(j) > -1e-8);            // pressing down is not better
      } else {
        REQUIRE(grad(j) < 1e-8);             // pressing up is not better
      }
    }
  }
}

namespace {

LinearMomentumModel make_valid_model(const Mat6& A, const Mat64& B) {
  LinearMomentumModel m;
  m.A = A;
  m.B = B;
  m.Ts = 0.02;
  m.residual = 0.0;
  m.rank = 11;
  m.valid = true;
  return m;
}

}  // namespace

TEST_CASE("maneuverability certificate") {
  const Mat6 A = 0.95 * Mat6::Identity();
  Mat64 B = Mat64::Zero();
  B(0, 0) = 1.0;
  B(1, 1) = 0.5;
  B(2, 2) = 0.8;
  B(3, 3) = 0.8;
  B(4, 3) = 0.2;
  B(5, 1) = -0.1;
  const LinearMomentumModel model = make_valid_model(A, B);

  const Vec4 dmin = Vec4::Constant(-1.0);
  const Vec4 dmax = Vec4::Constant(1.0);
  const Vec4 base = Vec4::Zero();
  const Vec6 L_ref = Vec6::Constant(10.0);

  SECTION("constant reference at the base momentum is trivially attainable") {
    std::vector<ManeuverSample> traj(5);
    for (auto& s : traj) s.L_d = L_ref;
    const ManeuverabilityResult r =
        maneuverable(model, traj, L_ref, base, dmin, dmax);
    REQUIRE(r.ok);
    REQUIRE(r.margin == Catch::Approx(1.0));
  }

  SECTION("one-step jump beyond the input authority is rejected") {
    std::vector<ManeuverSample> traj(2);
    traj[0].L_d = L_ref;
    traj[1].L_d = L_ref + Vec6::Constant(50.0);  // >> ||B|| * box diameter
    const ManeuverabilityResult r =
        maneuverable(model, traj, L_ref, base, dmin, dmax);
    REQUIRE_FALSE(r.ok);
  }

  SECTION("enlarging the box never breaks feasibility") {
    std::vector<ManeuverSample> traj(8);
    for (int k = 0; k < 8; ++k)
      traj[k].L_d = L_ref + Vec6::Constant(0.25 * k);
    const ManeuverabilityResult tight =
        maneuverable(model, traj, L_ref, base, dmin, dmax);
    const ManeuverabilityResult wide = maneuverable(
        model, traj, L_ref, base, Vec4(3.0 * dmin), Vec4(3.0 * dmax));
    for (std::size_t k = 0; k < tight.residuals.size(); ++k)
      REQUIRE(wide.residuals[k] <= tight.residuals[k] + 1e-12);
    if (tight.ok) REQUIRE(wide.ok);
  }

  SECTION("invalid models and unsupported horizons are rejected") {
    LinearMomentumModel bad = model;
    bad.valid = false;
    std::vector<ManeuverSample> traj(3);
    REQUIRE_THROWS_AS(maneuverable(bad, traj, L_ref, base, dmin, dmax),
                      ParameterError);
    REQUIRE_THROWS_AS(maneuverable(model, traj, L_ref, base, dmin, dmax, 3),
                      SolverError);
    std::vector<ManeuverSample> short_traj(1);
    REQUIRE_THROWS_AS(maneuverable(model, short_traj, L_ref, base, dmin, dmax),
                      ParameterError);
  }
}
