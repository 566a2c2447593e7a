#pragma once

// Batch studies: per-sample evaluation of a trajectory, peak tables over
// (gamma, radius) grids, cutting-force sweeps and motor feasibility.

#include "orthowrist/dynamics.hpp"
#include "orthowrist/trajectory.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace orthowrist {

/// Everything a study needs besides the trajectory and the load.
struct WristModel {
  WristGeometry geometry;
  BodySet bodies = default_bodies();
  std::array<MotorSpec, 2> motors{};
  Vec3 gravity_work{0.0, 0.0, -9.81};  // work frame, Z up

  void validate() const;
  Vec3 gravity_base() const;
};

struct SampleResult {
  double t = 0.0;
  /// Finite-difference profile of the unwrapped IK angles.
  JointState profile;
  /// Rates and accelerations re-derived from the tool-axis motion so that
  /// both legs close exactly; this is the state fed to the dynamics.
  JointState state;
  DynamicsSolution solution;
  std::array<double, 2> motor_torque{};  // with reflected rotor inertia
  std::array<double, 2> motor_power{};
  double power_residual = 0.0;
};

enum class GatePolicy { enforce, report };

/// IK, joint profiles and inverse dynamics at every sample of `spec`.
/// With GatePolicy::enforce a solve above the residual gate throws
/// model-inconsistency naming the sample; with ::report it is kept.
std::vector<SampleResult> evaluate_trajectory(const TrajectorySpec& spec, const WristModel& model,
                                              const CuttingLoad& load,
                                              GatePolicy gate = GatePolicy::enforce);

/// Same pipeline on an arbitrary uniformly sampled path given in R1.
std::vector<SampleResult> evaluate_samples(std::span<const ToolOrientation> samples, double dt,
                                           const WristModel& model, const CuttingLoad& load,
                                           GatePolicy gate = GatePolicy::enforce);

struct PeakRecord {
  double gamma = 0.0;
  double radius = 0.0;
  std::array<double, 4> max_rates{};
  std::array<double, 4> max_accels{};
  std::array<double, 2> max_torques{};
  std::array<double, 2> max_powers{};
};

/// Absolute maxima over samples. Rates and accelerations come from the
/// finite-difference profiles; torques and powers are motor-side.
PeakRecord extract_peaks(const TrajectorySpec& spec, std::span<const SampleResult> samples);

/// One PeakRecord per spec, in input order. Specs are evaluated on up to
/// `workers` threads (0 picks the hardware concurrency). Failures are
/// rethrown with the offending spec identified.
std::vector<PeakRecord> sweep_peaks(std::span<const TrajectorySpec> specs, const WristModel& model,
                                    const CuttingLoad& load, unsigned workers = 0);

/// Cartesian product of cone angles and radii, gamma-major.
std::vector<TrajectorySpec> grid_specs(std::span<const double> gammas,
                                       std::span<const double> radii,
                                       const TrajectorySpec& base);

struct ForcePoint {
  double force = 0.0;
  double lever = 0.0;
  std::array<double, 2> max_torques{};
};

/// Peak motor torques for equal cutting components Fc at lever `lever`.
std::vector<ForcePoint> force_sweep(const TrajectorySpec& base, std::span<const double> forces,
                                    double lever, const WristModel& model, unsigned workers = 0);

enum class TorqueClass { continuous_ok, intermittent_only, infeasible };
enum class SpeedClass { ok, over_nominal, over_max };

std::string_view to_string(TorqueClass c) noexcept;
std::string_view to_string(SpeedClass c) noexcept;

/// Peaks equal to a threshold stay in the better class.
TorqueClass classify_torque(double peak_torque, const MotorSpec& motor);
SpeedClass classify_speed(double peak_joint_rate, const MotorSpec& motor);

struct ActuatorFeasibility {
  double peak_torque = 0.0;
  double peak_rate = 0.0;
  TorqueClass torque = TorqueClass::continuous_ok;
  SpeedClass speed = SpeedClass::ok;
  double continuous_margin = 0.0;  // continuous_torque - peak
  double max_margin = 0.0;         // max_torque - peak
  double speed_margin = 0.0;       // nominal_speed - peak motor shaft speed
};

struct FeasibilityReport {
  std::array<ActuatorFeasibility, 2> actuators;
  bool feasible() const;
};

/// Actuator i is checked against motors[i] using the peaks of joint i.
FeasibilityReport motor_feasibility(const PeakRecord& peaks, std::span<const MotorSpec, 2> motors);

}  // namespace orthowrist
