#include "orthowrist/analysis.hpp"
#include "orthowrist/dynamics.hpp"
#include "orthowrist/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace orthowrist {
namespace {

constexpr double kPi = std::numbers::pi;
const Vec3 kGravityBase = WristGeometry{}.base_from_work() * Vec3(0, 0, -9.81);

JointState at_rest(const ToolOrientation& v, const WristGeometry& g = {}) {
  JointState s;
  s.angles = inverse_kinematics(v, g);
  return s;
}

// Analytic cone motion in R1, sampled at t, with closure-consistent rates.
JointState cone_state(double t, const WristGeometry& g, Vec3* v_out = nullptr) {
  const double gamma = kPi / 4, w = 4.0;
  const Mat3 r = g.base_from_work().matrix();
  const Vec3 v = r * Vec3(std::sin(gamma) * std::cos(w * t), std::sin(gamma) * std::sin(w * t), -std::cos(gamma));
  const Vec3 vd = r * Vec3(-w * std::sin(gamma) * std::sin(w * t), w * std::sin(gamma) * std::cos(w * t), 0.0);
  const Vec3 vdd = r * Vec3(-w * w * std::sin(gamma) * std::cos(w * t),
                            -w * w * std::sin(gamma) * std::sin(w * t), 0.0);
  if (v_out) *v_out = v;
  return joint_state_from_tool_motion(inverse_kinematics(ToolOrientation::normalized(v), g), vd, vdd,
                                      g, t);
}

TEST(BodyMotion, RestHasNoMotion) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const MechanismMotion m = body_motion(at_rest(ToolOrientation::normalized(Vec3(0.3, -0.9, 0.2))), g, bodies);
  for (const BodyMotion& b : m.bodies) {
    EXPECT_EQ(b.omega.norm(), 0.0);
    EXPECT_EQ(b.alpha.norm(), 0.0);
    EXPECT_EQ(b.com_accel.norm(), 0.0);
    EXPECT_EQ(b.com_velocity.norm(), 0.0);
  }
}

TEST(BodyMotion, PureTheta1RotationOfProximal1) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  JointState s = at_rest(ToolOrientation::normalized(Vec3(0.3, -0.9, 0.2)));
  const double w = 2.5;
  s.rates[0] = w;
  const MechanismMotion m = body_motion(s, g, bodies);
  const BodyMotion& p1 = m[BodyKind::proximal1];
  EXPECT_LE((p1.omega - w * m.axis(1)).norm(), 1e-15);
  const Vec3 c = bodies[BodyKind::proximal1].com_offset;
  const double perp = std::hypot(c.x(), c.y());  // body Z is e1
  EXPECT_NEAR(p1.com_accel.norm(), w * w * perp, 1e-12);
}

TEST(BodyMotion, ClosureViolationIsInconsistentState) {
  JointState s = at_rest(ToolOrientation::normalized(Vec3(0.3, -0.9, 0.2)));
  s.angles[3] += 1e-3;
  try {
    body_motion(s, WristGeometry{}, default_bodies());
    FAIL();
  } catch (const WristError& e) {
    EXPECT_EQ(e.category(), ErrorCategory::inconsistent_state);
  }
}

Vec3 vee(const Mat3& w) { return Vec3(w(2, 1) - w(1, 2), w(0, 2) - w(2, 0), w(1, 0) - w(0, 1)) / 2.0; }

TEST(BodyMotion, AngularVelocityMatchesDifferencedOrientation) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const double t = 0.3;
  const MechanismMotion m0 = body_motion(cone_state(t, g), g, bodies);
  double prev = 0.0;
  for (double h : {1e-3, 5e-4}) {
    const MechanismMotion mp = body_motion(cone_state(t + h, g), g, bodies);
    const MechanismMotion mm = body_motion(cone_state(t - h, g), g, bodies);
    double err = 0.0;
    for (std::size_t b = 0; b < 4; ++b) {
      const Mat3 rdot = (mp.bodies[b].orientation.matrix() - mm.bodies[b].orientation.matrix()) / (2 * h);
      const Vec3 w = vee(rdot * m0.bodies[b].orientation.matrix().transpose());
      err = std::max(err, (w - m0.bodies[b].omega).norm());
      const Vec3 vfd = (mp.bodies[b].com_position - mm.bodies[b].com_position) / (2 * h);
      err = std::max(err, (vfd - m0.bodies[b].com_velocity).norm());
    }
    EXPECT_LT(err, 1e-4);
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.8);
    prev = err;
  }
}

TEST(BodyMotion, CentresOfMassStayOnSpheres) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  for (double t : {0.0, 0.2, 0.7}) {
    const MechanismMotion m = body_motion(cone_state(t, g), g, bodies);
    for (const BodyMotion& b : m.bodies) {
      EXPECT_NEAR(b.com_position.dot(b.com_velocity), 0.0, 1e-12);
    }
  }
}

TEST(AssembleSystem, Dimensions) {
  EXPECT_EQ(kEquationCount, 24);
  EXPECT_EQ(kUnknownCount, 23);
  EXPECT_EQ(unknown_labels().size(), 23u);
  EXPECT_EQ(unknown_labels()[kActuatorColumns[0]], "P.e1");
  EXPECT_EQ(unknown_labels()[kActuatorColumns[1]], "R.e2");
}

TEST(AssembleSystem, StaticsWithoutGravityHasZeroRhs) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const MechanismMotion m = body_motion(at_rest(ToolOrientation::normalized(Vec3(0.1, -0.8, -0.4))), g, bodies);
  const LinearSystem sys = assemble_system(m, bodies, Vec3::Zero(), CuttingLoad{});
  EXPECT_EQ(sys.rhs.norm(), 0.0);
}

TEST(AssembleSystem, LoadEntersOnlyTerminalRowsLinearly) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const MechanismMotion m = body_motion(cone_state(0.4, g), g, bodies);
  const CuttingLoad one{Vec3(10.0, -20.0, 35.0), 0.11};
  const CuttingLoad two{2.0 * one.components, one.lever};
  const auto base = assemble_system(m, bodies, kGravityBase, CuttingLoad{0.0 * one.components, one.lever});
  const auto s1 = assemble_system(m, bodies, kGravityBase, one);
  const auto s2 = assemble_system(m, bodies, kGravityBase, two);
  EXPECT_EQ((s1.matrix - base.matrix).norm(), 0.0);
  for (int r = 0; r < kEquationCount; ++r) {
    const double d1 = s1.rhs[r] - base.rhs[r];
    const double d2 = s2.rhs[r] - base.rhs[r];
    if (r / 6 != static_cast<int>(BodyKind::terminal)) {
      EXPECT_EQ(d1, 0.0) << r;
      EXPECT_EQ(d2, 0.0) << r;
    } else {
      EXPECT_NEAR(d2, 2.0 * d1, 1e-12 * std::max(1.0, std::abs(d2))) << r;
    }
  }
}

TEST(SolveWrenches, StaticsWithoutGravityIsZero) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const MechanismMotion m = body_motion(at_rest(ToolOrientation::normalized(Vec3(0.1, -0.8, -0.4))), g, bodies);
  const DynamicsSolution s = solve_wrenches(assemble_system(m, bodies, Vec3::Zero(), CuttingLoad{}));
  EXPECT_EQ(s.tau[0], 0.0);
  EXPECT_EQ(s.tau[1], 0.0);
  EXPECT_EQ(s.reactions.norm(), 0.0);
  EXPECT_EQ(s.residual, 0.0);
}

TEST(SolveWrenches, GravityStaticsMatchVirtualWorkOracle) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  std::mt19937_64 rng(testing::kSeed + 20);
  for (int i = 0; i < 300; ++i) {
    const ToolOrientation v = testing::random_orientation(rng, 75.0 * kPi / 180.0);
    const JointState s = at_rest(v);
    const MechanismMotion m = body_motion(s, g, bodies);
    const DynamicsSolution sol = solve_wrenches(assemble_system(m, bodies, kGravityBase, CuttingLoad{}));
    const auto oracle = testing::static_gravity_torques(s.angles, g, bodies, kGravityBase);
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(sol.tau[j], oracle[j], 1e-9 * std::max(1.0, std::abs(oracle[j])))
          << "v = " << v.vector().transpose();
    }
  }
}

TEST(SolveWrenches, TorqueIsAffineInLoad) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const MechanismMotion m = body_motion(cone_state(1.1, g), g, bodies);
  const Vec3 dir(1.0, -0.5, 2.0);
  auto tau = [&](double f) {
    return solve_wrenches(assemble_system(m, bodies, kGravityBase, CuttingLoad{f * dir, 0.15})).tau;
  };
  const auto t0 = tau(0.0), t1 = tau(40.0), t3 = tau(120.0);
  for (int j = 0; j < 2; ++j) {
    const double d1 = t1[j] - t0[j], d3 = t3[j] - t0[j];
    EXPECT_NEAR(d3, 3.0 * d1, 1e-10 * std::abs(d3));
  }
}

TEST(SolveWrenches, ReactionLookup) {
  DynamicsSolution s;
  s.reactions[kActuatorColumns[1]] = 4.5;
  EXPECT_EQ(s.reaction("R.e2"), 4.5);
  EXPECT_THROW(s.reaction("nope"), WristError);
}

TEST(SolveWrenches, OffLineDistalMassTripsGate) {
  const WristGeometry g;
  BodySet bodies = default_bodies();
  bodies[BodyKind::distal].com_offset = Vec3(0.02, 0.0, 0.02);
  const MechanismMotion m = body_motion(cone_state(0.5, g), g, bodies);
  const LinearSystem sys = assemble_system(m, bodies, kGravityBase, CuttingLoad{});
  EXPECT_GE(solve_wrenches_unchecked(sys).residual, kResidualGate);
  try {
    solve_wrenches(sys);
    FAIL();
  } catch (const WristError& e) {
    EXPECT_EQ(e.category(), ErrorCategory::model_inconsistency);
  }
}

TEST(SolveWrenches, PowerIsTorqueTimesRate) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const JointState st = cone_state(0.9, g);
  const MechanismMotion m = body_motion(st, g, bodies);
  const DynamicsSolution s = solve_wrenches(assemble_system(m, bodies, kGravityBase, CuttingLoad{}));
  EXPECT_EQ(s.power[0], s.tau[0] * st.rates[0]);
  EXPECT_EQ(s.power[1], s.tau[1] * st.rates[1]);
}

TEST(ReflectedMotorTorque, Examples) {
  MotorSpec m;
  EXPECT_NEAR(reflected_motor_torque(0.0, 100.0, m), 0.262, 1e-15);
  EXPECT_EQ(reflected_motor_torque(3.25, 0.0, m), 3.25);
  m.rotor_inertia = 0.0;
  EXPECT_EQ(reflected_motor_torque(3.25, 50.0, m), 3.25);
  MotorSpec geared;
  geared.reduction_ratio = 10.0;
  EXPECT_NEAR(reflected_motor_torque(1.0, 2.0, geared), 1.0 + 0.00262 * 100.0 * 2.0, 1e-15);
}

TEST(PowerBalance, StaticsIsZero) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const JointState s = at_rest(ToolOrientation::normalized(Vec3(0.1, -0.8, -0.4)));
  const MechanismMotion m = body_motion(s, g, bodies);
  const CuttingLoad load = CuttingLoad::equal(100.0, 0.11);
  const DynamicsSolution sol = solve_wrenches(assemble_system(m, bodies, kGravityBase, load));
  EXPECT_EQ(power_balance_residual(s, sol, m, bodies, kGravityBase, load), 0.0);
}

TEST(PowerBalance, AnalyticConeWithAndWithoutLoad) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  for (const CuttingLoad& load : {CuttingLoad{}, CuttingLoad::equal(100.0, 0.11)}) {
    for (int i = 0; i < 50; ++i) {
      const JointState s = cone_state(0.031 * i, g);
      const MechanismMotion m = body_motion(s, g, bodies);
      const DynamicsSolution sol = solve_wrenches(assemble_system(m, bodies, kGravityBase, load));
      EXPECT_LT(power_balance_residual(s, sol, m, bodies, kGravityBase, load), 1e-6);
    }
  }
}

TEST(PowerBalance, DetectsWrongTorque) {
  const WristGeometry g;
  const BodySet bodies = default_bodies();
  const JointState s = cone_state(0.2, g);
  const MechanismMotion m = body_motion(s, g, bodies);
  DynamicsSolution sol = solve_wrenches(assemble_system(m, bodies, kGravityBase, CuttingLoad{}));
  sol.tau[0] += 0.05;
  EXPECT_GT(power_balance_residual(s, sol, m, bodies, kGravityBase, CuttingLoad{}), 1e-3);
}

TEST(FrameInvariance, TurningMountAndPathTogether) {
  WristModel a;
  WristModel b;
  const double turn = 0.7;
  b.geometry.mounting_azimuth += turn;
  TrajectorySpec spec;
  spec.gamma = kPi / 4;
  spec.radius = 0.25;
  spec.sample_count = 201;
  const auto timed = generate_trajectory(spec);
  const Mat3 rz = Eigen::AngleAxisd(turn, Vec3::UnitZ()).toRotationMatrix();
  std::vector<ToolOrientation> va, vb;
  for (const auto& s : timed) {
    va.push_back(ToolOrientation::from_unit(a.geometry.base_from_work() * s.direction.vector()));
    vb.push_back(ToolOrientation::normalized(b.geometry.base_from_work() * (rz * s.direction.vector())));
  }
  const auto ra = evaluate_samples(va, spec.time_step(), a, CuttingLoad{});
  const auto rb = evaluate_samples(vb, spec.time_step(), b, CuttingLoad{});
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(std::abs(ra[i].solution.tau[j]), std::abs(rb[i].solution.tau[j]), 1e-9);
    }
  }
}

TEST(BodyParams, Validation) {
  const WristGeometry g;
  auto expect_invalid = [&](const BodySet& set) {
    try {
      set.validate(g);
      ADD_FAILURE() << "accepted invalid bodies";
    } catch (const WristError& e) {
      EXPECT_EQ(e.category(), ErrorCategory::invalid_input);
    }
  };
  EXPECT_NO_THROW(default_bodies().validate(g));
  BodySet s = default_bodies();
  s[BodyKind::terminal].mass = -1.0;
  expect_invalid(s);
  s = default_bodies();
  s[BodyKind::distal].inertia(0, 1) = 1e-4;
  expect_invalid(s);
  s = default_bodies();
  s[BodyKind::proximal2].inertia = Vec3(1e-3, -1e-3, 1e-3).asDiagonal();
  expect_invalid(s);
  s = default_bodies();
  s[BodyKind::distal].force_points.clear();
  expect_invalid(s);
  s = default_bodies();
  s[BodyKind::proximal1].force_points.at("base") = Vec3(0.01, 0.0, 0.1);
  expect_invalid(s);
  s = default_bodies();
  s[BodyKind::terminal].force_points.at("spherical") = Vec3(0.0, 0.01, 0.07);
  expect_invalid(s);
  s = default_bodies();
  s[BodyKind::terminal].force_points.at("revolute") = Vec3(0.0, 0.08, 0.01);
  expect_invalid(s);
}

TEST(MotorSpec, Validation) {
  EXPECT_NO_THROW(MotorSpec{}.validate());
  MotorSpec m;
  m.max_torque = 20.0;
  EXPECT_THROW(m.validate(), WristError);
  m = MotorSpec{};
  m.max_speed = m.nominal_speed / 2;
  EXPECT_THROW(m.validate(), WristError);
  m = MotorSpec{};
  m.rotor_inertia = 0.0;
  EXPECT_THROW(m.validate(), WristError);
}

TEST(MotorSpec, CatalogueDefaults) {
  const MotorSpec m;
  EXPECT_EQ(m.rotor_inertia, 0.00262);
  EXPECT_NEAR(m.nominal_speed, 2500.0 * 2 * kPi / 60, 1e-12);
  EXPECT_NEAR(m.max_speed, 6500.0 * 2 * kPi / 60, 1e-12);
  EXPECT_EQ(m.max_torque, 74.0);
  EXPECT_EQ(m.continuous_torque, 23.0);
  EXPECT_EQ(m.rated_power, 800.0);
}

TEST(CuttingLoad, Validation) {
  EXPECT_THROW((CuttingLoad{Vec3::Zero(), -0.1}).validate(), WristError);
  const CuttingLoad c = CuttingLoad::equal(25.0, 0.06);
  EXPECT_EQ(c.components, Vec3::Constant(25.0));
  EXPECT_EQ(c.lever, 0.06);
}

}  // namespace
}  // namespace orthowrist
