#include "orthowrist/kinematics.hpp"

#include "orthowrist/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace orthowrist {

namespace {

// Angle 2*atan(T) for one root T of a*T^2 + b*T + c = 0. `plus_root` selects
// T = (-b + sqrt(disc)) / 2a, otherwise T = (-b - sqrt(disc)) / 2a. The root is
// carried as a ratio num/den, switching to the conjugate form 2c / (-b -+ sqrt)
// when that avoids cancellation, so a -> 0 (T -> infinity) stays finite.
double half_tangent_root(double a, double b, double c, bool plus_root, const char* stage) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -kSingularDenominator * scale * scale) {
      throw WristError(ErrorCategory::unreachable_orientation,
                       std::string(stage) + ": negative discriminant " + std::to_string(disc));
    }
    disc = 0.0;
  }
  const double root = plus_root ? std::sqrt(disc) : -std::sqrt(disc);
  double num = -b + root;
  double den = 2.0 * a;
  if (std::abs(-b + root) < std::abs(-b - root)) {
    num = 2.0 * c;
    den = -b - root;
  }
  if (std::abs(num) < kSingularDenominator * scale && std::abs(den) < kSingularDenominator * scale) {
    throw WristError(ErrorCategory::singular_configuration,
                     std::string(stage) + ": half-angle quadratic degenerates");
  }
  // theta = atan2(2T, 1 - T^2) with T = num/den, both arguments scaled by den^2.
  return std::atan2(2.0 * num * den, den * den - num * num);
}

}  // namespace

ToolOrientation ToolOrientation::from_unit(const Vec3& v) {
  if (!v.allFinite()) {
    throw WristError(ErrorCategory::invalid_input, "tool orientation has non-finite components");
  }
  if (std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw WristError(ErrorCategory::invalid_input,
                     "tool orientation is not unit (norm " + std::to_string(v.norm()) + ")");
  }
  return ToolOrientation(v);
}

ToolOrientation ToolOrientation::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!v.allFinite() || !(n > 0.0)) {
    throw WristError(ErrorCategory::invalid_input, "cannot normalize a zero or non-finite vector");
  }
  return ToolOrientation(v / n);
}

ToolOrientation vector_from_pan_tilt(double pan, double tilt) {
  if (!std::isfinite(pan) || !std::isfinite(tilt)) {
    throw WristError(ErrorCategory::invalid_input, "pan/tilt must be finite");
  }
  if (std::abs(tilt) > std::numbers::pi / 2) {
    throw WristError(ErrorCategory::out_of_range, "tilt must lie in [-pi/2, pi/2]");
  }
  const double ct = std::cos(tilt);
  return ToolOrientation::normalized(
      Vec3(std::cos(pan) * ct, std::sin(pan) * ct, std::sin(tilt)));
}

PanTilt pan_tilt_from_vector(const ToolOrientation& v) {
  const double planar = std::hypot(v.x(), v.y());
  if (planar < kOrientationSingularity) {
    throw WristError(ErrorCategory::singular_orientation,
                     "pan is undefined for a tool axis along the base Z axis");
  }
  return PanTilt{std::atan2(v.y(), v.x()), std::atan2(v.z(), planar)};
}

JointAngles JointAngles::home(const WristGeometry& geometry) {
  return JointAngles{geometry.home_thetas};
}

JointAngles inverse_kinematics(const ToolOrientation& orientation, const WristGeometry& geometry) {
  const Vec3& v = orientation.vector();
  const auto& al = geometry.alpha;
  const double sa0 = std::sin(al[0]), ca0 = std::cos(al[0]);
  const double sa1 = std::sin(al[1]), ca1 = std::cos(al[1]);
  const double sa2 = std::sin(al[2]), ca2 = std::cos(al[2]);
  const double sa3 = std::sin(al[3]), ca3 = std::cos(al[3]);
  const double sa4 = std::sin(al[4]), ca4 = std::cos(al[4]);
  const double sb1 = std::sin(kToolBeta1), cb1 = std::cos(kToolBeta1);
  const double sb2 = std::sin(kToolBeta2), cb2 = std::cos(kToolBeta2);

  // Angle gamma between v and e3, from v = (s b2, s b1 c b2, c b1 c b2) in R5.
  const double c_gamma = sa3 * sb1 * cb2 + ca3 * cb1 * cb2;

  JointAngles q;

  // theta1 from e3 . v = cos(gamma), e3 = (s1 s a1, -c1 s a1, c a1) in R1.
  // Note the v_y terms carry s a1, not c a1.
  {
    const double a = v.z() * ca1 + v.y() * sa1 - c_gamma;
    const double b = 2.0 * v.x() * sa1;
    const double c = v.z() * ca1 - v.y() * sa1 - c_gamma;
    q[0] = half_tangent_root(a, b, c, /*plus_root=*/true, "theta1");
  }
  const double s1 = std::sin(q[0]), c1 = std::cos(q[0]);

  // theta3 from v expressed in R3: d = X3 . v, e = Y3 . v with
  // Y3 = (-s1 c a1, c1 c a1, s a1), so e ends in v_z s a1.
  {
    const double a = sb2;
    const double b = sa3 * cb1 * cb2 - ca3 * sb1 * cb2;
    const double d = v.x() * c1 + v.y() * s1;
    const double e = -v.x() * s1 * ca1 + v.y() * c1 * ca1 + v.z() * sa1;
    const double num = a * e + b * d;
    const double den = a * d - b * e;
    if (std::hypot(num, den) < kSingularDenominator) {
      throw WristError(ErrorCategory::singular_configuration, "theta3: v is aligned with e3");
    }
    q[2] = std::atan2(num, den);
  }
  const double s3 = std::sin(q[2]), c3 = std::cos(q[2]);

  // u = e5 from leg one, composed from the frame chain.
  const double ux = s1 * sa1 * ca3 + s1 * c3 * ca1 * sa3 + c1 * s3 * sa3;
  const double uy = -c1 * sa1 * ca3 - c1 * c3 * ca1 * sa3 + s1 * s3 * sa3;
  const double uz = ca1 * ca3 - c3 * sa1 * sa3;

  // theta2 from e4 . u = cos(a4), half-angle substitution T2 = tan(theta2 / 2).
  {
    const double a = ux * sa0 * ca2 + uy * sa2 + uz * ca0 * ca2 - ca4;
    const double b = 2.0 * (ux * ca0 * sa2 - uz * sa0 * sa2);
    const double c = ux * sa0 * ca2 - uy * sa2 + uz * ca0 * ca2 - ca4;
    q[1] = half_tangent_root(a, b, c, /*plus_root=*/false, "theta2");
  }
  const double s2 = std::sin(q[1]), c2 = std::cos(q[1]);

  // theta4 from u expressed in R4; d4 carries c a0 s a2 from the frame product.
  {
    if (std::abs(sa4) < kSingularDenominator) {
      throw WristError(ErrorCategory::singular_configuration, "theta4: sin(alpha4) vanishes");
    }
    const double a4 = -ux * (sa0 * sa2 - s2 * ca0 * ca2);
    const double b4 = -uy * c2 * ca2;
    const double d4 = -uz * (ca0 * sa2 + s2 * sa0 * ca2);
    const double s4 = (ux * c2 * ca0 + uy * s2 - uz * c2 * sa0) / sa4;
    const double c4 = (a4 + b4 + d4) / sa4;
    if (std::hypot(s4, c4) < kSingularDenominator) {
      throw WristError(ErrorCategory::singular_configuration, "theta4: v is aligned with e4");
    }
    q[3] = std::atan2(s4, c4);
  }

  for (auto& t : q.theta) t = principal_angle(t);
  return q;
}

ToolOrientation forward_kinematics(double theta1, double theta3, const WristGeometry& geometry) {
  const std::array<double, 2> leg{theta1, theta3};
  const LegChain chain = chain_frames(leg, geometry, Leg::one);
  return ToolOrientation::normalized(chain.axes.back());
}

Vec3 leg_two_tool_axis(double theta2, double theta4, const WristGeometry& geometry) {
  const std::array<double, 2> leg{theta2, theta4};
  return chain_frames(leg, geometry, Leg::two).axes.back();
}

double closure_error(const JointAngles& q, const WristGeometry& geometry) {
  const Vec3 e5 = forward_kinematics(q[0], q[2], geometry).vector();
  const Vec3 e6 = leg_two_tool_axis(q[1], q[3], geometry);
  return (e5 - e6).norm();
}

std::vector<JointState> trajectory_joint_profiles(std::span<const ToolOrientation> samples,
                                                  double dt, const WristGeometry& geometry) {
  const std::size_t n = samples.size();
  if (n < 3) {
    throw WristError(ErrorCategory::invalid_input,
                     "joint profiles need at least 3 samples, got " + std::to_string(n));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw WristError(ErrorCategory::invalid_input, "time step must be positive");
  }

  std::array<std::vector<double>, 4> raw;
  for (auto& r : raw) r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    JointAngles q;
    try {
      q = inverse_kinematics(samples[i], geometry);
    } catch (const WristError& e) {
      throw WristError(e.category(), "sample " + std::to_string(i) + ": " + e.what());
    }
    for (std::size_t j = 0; j < 4; ++j) raw[j][i] = q[j];
  }

  std::array<std::vector<double>, 4> angles, rates, accels;
  for (std::size_t j = 0; j < 4; ++j) {
    angles[j] = unwrap_angles(raw[j]);
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(angles[j][i] - angles[j][i - 1]) > std::numbers::pi / 2) {
        throw WristError(ErrorCategory::branch_jump,
                         "sample " + std::to_string(i) + ": theta" + std::to_string(j + 1) +
                             " jumps by more than pi/2 (singularity crossing)");
      }
    }
    rates[j] = central_difference({dt, angles[j]}).values;
    accels[j] = central_difference({dt, rates[j]}).values;
  }

  std::vector<JointState> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = out[i];
    s.t = static_cast<double>(i) * dt;
    for (std::size_t j = 0; j < 4; ++j) {
      s.angles[j] = angles[j][i];
      s.rates[j] = rates[j][i];
      s.accels[j] = accels[j][i];
    }
  }
  return out;
}

namespace {

// Rates (r_a, r_b) with r_a (a x v) + r_b (b x v) = rhs, in least squares.
Eigen::Vector2d solve_leg_rates(const Vec3& a, const Vec3& b, const Vec3& v, const Vec3& rhs,
                                const char* leg) {
  Eigen::Matrix<double, 3, 2> jac;
  jac.col(0) = a.cross(v);
  jac.col(1) = b.cross(v);
  const Eigen::Matrix2d normal = jac.transpose() * jac;
  if (std::abs(normal.determinant()) < kSingularDenominator) {
    throw WristError(ErrorCategory::singular_configuration,
                     std::string(leg) + " Jacobian is singular (tool axis aligned with a base axis)");
  }
  return normal.ldlt().solve(jac.transpose() * rhs);
}

}  // namespace

JointState joint_state_from_tool_motion(const JointAngles& q, const Vec3& v_dot,
                                        const Vec3& v_ddot, const WristGeometry& geometry,
                                        double t) {
  const std::array<double, 2> leg1{q[0], q[2]};
  const std::array<double, 2> leg2{q[1], q[3]};
  const LegChain one = chain_frames(leg1, geometry, Leg::one);
  const LegChain two = chain_frames(leg2, geometry, Leg::two);
  const Vec3& e1 = one.axes[0];
  const Vec3& e3 = one.axes[1];
  const Vec3& v = one.axes[2];
  const Vec3& e2 = two.axes[0];
  const Vec3& e4 = two.axes[1];

  JointState s;
  s.angles = q;
  s.t = t;

  const Eigen::Vector2d r13 = solve_leg_rates(e1, e3, v, v_dot, "leg one");
  const Eigen::Vector2d r24 = solve_leg_rates(e2, e4, v, v_dot, "leg two");
  s.rates = {r13[0], r24[0], r13[1], r24[1]};

  // v'' = alpha x v + omega x v', alpha = q1'' e1 + q3'' e3 + q1' q3' (e1 x e3).
  const Vec3 w1 = r13[0] * e1 + r13[1] * e3;
  const Vec3 rhs1 = v_ddot - (r13[0] * r13[1] * e1.cross(e3)).cross(v) - w1.cross(v_dot);
  const Vec3 w2 = r24[0] * e2 + r24[1] * e4;
  const Vec3 rhs2 = v_ddot - (r24[0] * r24[1] * e2.cross(e4)).cross(v) - w2.cross(v_dot);
  const Eigen::Vector2d a13 = solve_leg_rates(e1, e3, v, rhs1, "leg one");
  const Eigen::Vector2d a24 = solve_leg_rates(e2, e4, v, rhs2, "leg two");
  s.accels = {a13[0], a24[0], a13[1], a24[1]};
  return s;
}

}  // namespace orthowrist
