#pragma once

// Newton-Euler inverse dynamics of the four moving links.
//
// Joint models (friction-free):
//   base      <-> proximal-1  revolute about e1, actuated   3 force, 2 moment, 1 torque
//   base      <-> proximal-2  revolute about e2, actuated   3 force, 2 moment, 1 torque
//   proximal-1 <-> terminal   revolute about e3             3 force, 2 moment
//   terminal  <-> distal      spherical                     3 force
//   distal    <-> proximal-2  planar, normal e4             1 force, 2 moment
//
// Action and reaction share one unknown per wrench component, so the 24
// Newton-Euler equations are written in 23 unknowns. The remaining freedom of
// the locked mechanism is a spin of the distal about the line through the
// spherical centre parallel to e4. The distal keeps the orientation of
// proximal-2 and translates in its plane; with its centre of mass on that line
// and an inertia tensor aligned with the proximal-2 frame, the redundant
// equation holds identically and the least-squares residual vanishes.

#include "orthowrist/kinematics.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <numbers>
#include <string>
#include <string_view>

namespace orthowrist {

enum class BodyKind { proximal1 = 0, proximal2 = 1, terminal = 2, distal = 3 };

inline constexpr std::array<BodyKind, 4> kAllBodies{BodyKind::proximal1, BodyKind::proximal2,
                                                    BodyKind::terminal, BodyKind::distal};

std::string_view to_string(BodyKind kind) noexcept;

/// Names of the joint interaction points carried by each body.
namespace point_names {
inline constexpr std::string_view base = "base";            // proximal-1, proximal-2
inline constexpr std::string_view revolute = "revolute";    // terminal, on e3
inline constexpr std::string_view spherical = "spherical";  // terminal, on the tool axis
inline constexpr std::string_view planar = "planar";        // distal
}  // namespace point_names

/// Mass properties of one link, in its body frame.
///
/// Body frames: proximal-1 is R1 turned by theta1 about e1, proximal-2 is R2
/// turned by theta2 about e2 (both have Z on their base axis), the terminal is
/// R5 (Z along the tool axis) and the distal is R4 (Z along e4). Offsets are
/// measured from the wrist centre, except for the distal whose origin is the
/// spherical joint centre it shares with the terminal.
struct BodyParams {
  BodyKind kind = BodyKind::terminal;
  double mass = 1.0;
  Vec3 com_offset = Vec3::Zero();
  Mat3 inertia = Mat3::Identity();  // about the centre of mass
  std::map<std::string, Vec3, std::less<>> force_points;

  /// Mass > 0, inertia symmetric positive definite, required points present.
  void validate() const;
  const Vec3& force_point(std::string_view name) const;
};

struct BodySet {
  std::array<BodyParams, 4> items;

  BodyParams& operator[](BodyKind kind) { return items[static_cast<std::size_t>(kind)]; }
  const BodyParams& operator[](BodyKind kind) const { return items[static_cast<std::size_t>(kind)]; }

  /// Per-body checks plus the placement rules the joint models need: base
  /// points on the base axes, the terminal revolute point on e3 and the
  /// spherical centre on the tool axis.
  void validate(const WristGeometry& geometry) const;
};

/// Plausible link parameters standing in for CAD-extracted data.
BodySet default_bodies();

/// Revolutions per minute to rad/s.
inline constexpr double rpm_to_rad_s(double rpm) { return rpm * (2.0 * std::numbers::pi / 60.0); }

struct MotorSpec {
  double rotor_inertia = 0.00262;  // kg m^2
  double reduction_ratio = 1.0;
  double nominal_speed = rpm_to_rad_s(2500.0);  // rad/s
  double max_speed = rpm_to_rad_s(6500.0);      // rad/s
  double max_torque = 74.0;                                        // N m
  double continuous_torque = 23.0;                                 // N m
  double rated_power = 800.0;                                      // W

  void validate() const;
};

/// Machining force on the tool tip, resolved on (e3, e5, e3 x e5), applied at
/// `lever` metres from the wrist centre along the tool axis.
struct CuttingLoad {
  Vec3 components = Vec3::Zero();
  double lever = 0.0;

  /// Three equal components of magnitude `force`.
  static CuttingLoad equal(double force, double lever);
  void validate() const;
};

struct BodyMotion {
  RotationMatrix orientation;
  Vec3 origin = Vec3::Zero();
  Vec3 omega = Vec3::Zero();
  Vec3 alpha = Vec3::Zero();
  Vec3 com_position = Vec3::Zero();
  Vec3 com_velocity = Vec3::Zero();
  Vec3 com_accel = Vec3::Zero();
};

/// Motion of every link, in R1.
struct MechanismMotion {
  std::array<BodyMotion, 4> bodies;
  std::array<Vec3, 5> axes;  // e1..e5
  std::array<double, 2> actuator_rates{};

  const BodyMotion& operator[](BodyKind kind) const { return bodies[static_cast<std::size_t>(kind)]; }
  const Vec3& axis(int i) const { return axes[static_cast<std::size_t>(i - 1)]; }
};

inline constexpr double kClosureTolerance = 1e-6;

/// Throws inconsistent-state when the two legs disagree on the tool axis by
/// more than kClosureTolerance.
MechanismMotion body_motion(const JointState& state, const WristGeometry& geometry,
                            const BodySet& bodies);

inline constexpr int kEquationCount = 24;
inline constexpr int kUnknownCount = 23;

struct LinearSystem {
  Eigen::Matrix<double, kEquationCount, kUnknownCount> matrix;
  Eigen::Matrix<double, kEquationCount, 1> rhs;
  std::array<double, 2> actuator_rates{};
};

/// Labels of the unknowns, in column order. "P.e1" and "R.e2" are the two
/// actuator torques.
const std::array<std::string_view, kUnknownCount>& unknown_labels();
inline constexpr std::array<int, 2> kActuatorColumns{5, 11};

/// `gravity` is expressed in R1.
LinearSystem assemble_system(const MechanismMotion& motion, const BodySet& bodies,
                             const Vec3& gravity, const CuttingLoad& load);

struct DynamicsSolution {
  std::array<double, 2> tau{};
  Eigen::Matrix<double, kUnknownCount, 1> reactions = Eigen::Matrix<double, kUnknownCount, 1>::Zero();
  double residual = 0.0;
  std::array<double, 2> power{};

  double reaction(std::string_view label) const;
};

inline constexpr double kResidualGate = 1e-8;

/// Minimum-norm least-squares solve. Throws model-inconsistency when the
/// residual, relative to the right-hand side, reaches kResidualGate.
DynamicsSolution solve_wrenches(const LinearSystem& system);

/// Same solve without the gate; the residual is reported as is.
DynamicsSolution solve_wrenches_unchecked(const LinearSystem& system);

/// Actuator torque at the output shaft including the reflected rotor inertia.
double reflected_motor_torque(double tau_joint, double joint_accel, const MotorSpec& motor);

/// |sum tau_i q_i' + P_gravity + P_cutting - dKE/dt| / max(1, |dKE/dt|).
double power_balance_residual(const JointState& state, const DynamicsSolution& solution,
                              const MechanismMotion& motion, const BodySet& bodies,
                              const Vec3& gravity, const CuttingLoad& load);

/// Tool-tip point of the load and the force vector, in R1.
struct LoadWrench {
  Vec3 point = Vec3::Zero();
  Vec3 force = Vec3::Zero();
};
LoadWrench cutting_wrench(const MechanismMotion& motion, const CuttingLoad& load);

}  // namespace orthowrist
