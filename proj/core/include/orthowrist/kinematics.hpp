#pragma once

#include "orthowrist/rotation.hpp"

#include <array>
#include <span>
#include <vector>

namespace orthowrist {

/// Tolerances of the closed-form model.
inline constexpr double kRoundTripTolerance = 1e-9;
inline constexpr double kSingularDenominator = 1e-12;
inline constexpr double kOrientationSingularity = 1e-9;

/// Unit direction of the tool axis v. Kinematic functions read it in the base
/// frame R1; trajectory generators emit it in the work frame.
class ToolOrientation {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  /// The base Z axis.
  ToolOrientation() : v_(0.0, 0.0, 1.0) {}

  /// Throws invalid-input unless | |v| - 1 | <= 1e-12.
  static ToolOrientation from_unit(const Vec3& v);
  /// Normalizes; throws invalid-input on zero or non-finite input.
  static ToolOrientation normalized(const Vec3& v);

  const Vec3& vector() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }

 private:
  explicit ToolOrientation(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Tool-frame angles: the tool is carried along e5, so beta1 = beta2 = 0 and
/// the angle between v and e3 equals alpha3 (pi/2 for the default wrist).
inline constexpr double kToolBeta1 = 0.0;
inline constexpr double kToolBeta2 = 0.0;

struct PanTilt {
  double pan = 0.0;
  double tilt = 0.0;
};

/// v = (cos(pan) cos(tilt), sin(pan) cos(tilt), sin(tilt)) in R1.
/// Throws out-of-range when |tilt| > pi/2.
ToolOrientation vector_from_pan_tilt(double pan, double tilt);

/// Inverse of vector_from_pan_tilt. Throws singular-orientation when v is
/// within 1e-9 of the R1 Z axis, where pan is undefined.
PanTilt pan_tilt_from_vector(const ToolOrientation& v);

/// Joint variables theta1..theta4 stored at index 0..3.
struct JointAngles {
  std::array<double, 4> theta{};

  double& operator[](std::size_t i) { return theta[i]; }
  double operator[](std::size_t i) const { return theta[i]; }

  static JointAngles home(const WristGeometry& geometry);
};

struct JointState {
  JointAngles angles;
  std::array<double, 4> rates{};
  std::array<double, 4> accels{};
  double t = 0.0;
};

/// Closed-form inverse kinematics. Returns principal values in (-pi, pi].
///
/// Working mode: theta1 uses the "+sqrt" root of its half-angle quadratic and
/// theta2 the "-sqrt" root. Throws unreachable-orientation on a negative
/// discriminant and singular-configuration on degenerate denominators.
JointAngles inverse_kinematics(const ToolOrientation& v, const WristGeometry& geometry);

/// Tool axis e5 of leg one, in R1.
ToolOrientation forward_kinematics(double theta1, double theta3, const WristGeometry& geometry);

/// Closing axis e6 of leg two, in R1. Equals e5 on an assembled configuration.
Vec3 leg_two_tool_axis(double theta2, double theta4, const WristGeometry& geometry);

/// |e5 - e6| for the given angles.
double closure_error(const JointAngles& angles, const WristGeometry& geometry);

/// Joint angles, rates and accelerations along a uniformly sampled orientation
/// path (R1 components). Angles are unwrapped per joint and differentiated with
/// central_difference, so the returned angles are continuous, not principal.
///
/// Throws the IK error with the offending sample index in the message, or
/// branch-jump when an unwrapped joint still moves more than pi/2 in one step.
std::vector<JointState> trajectory_joint_profiles(std::span<const ToolOrientation> samples,
                                                  double dt, const WristGeometry& geometry);

/// Joint rates and accelerations implied by a known tool-axis motion
/// (v, dv/dt, d2v/dt2 in R1), solved leg by leg from the joint axes. Both legs
/// reproduce the same tool-axis motion, so the result satisfies the velocity
/// and acceleration closure exactly.
JointState joint_state_from_tool_motion(const JointAngles& angles, const Vec3& v_dot,
                                        const Vec3& v_ddot, const WristGeometry& geometry,
                                        double t = 0.0);

}  // namespace orthowrist
