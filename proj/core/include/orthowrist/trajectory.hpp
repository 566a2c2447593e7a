#pragma once

#include "orthowrist/kinematics.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace orthowrist {

enum class TrajectoryKind {
  semicircle_yz,  // v = (0, -sin d, -cos d), d in [pi/6, 5pi/6]
  circle_xy,      // v = (sin g cos d, sin g sin d, -cos g), d in [0, 2pi]
};

std::string_view to_string(TrajectoryKind kind) noexcept;

/// Test-trajectory parameters. The tool tip moves at constant speed
/// `tool_speed` on a path of radius `radius`, so the path angle advances at
/// tool_speed / radius.
struct TrajectorySpec {
  static constexpr std::size_t kDefaultSampleCount = 1001;

  TrajectoryKind kind = TrajectoryKind::circle_xy;
  double radius = 0.25;
  double gamma = 0.0;  // cone half-angle about the vertical, circle_xy only
  double tool_speed = 1.0;
  std::size_t sample_count = kDefaultSampleCount;

  /// Throws invalid-spec on any violated invariant.
  void validate() const;

  double start_angle() const;
  double angular_span() const;
  double sweep_rate() const { return tool_speed / radius; }
  double duration() const { return angular_span() * radius / tool_speed; }
  double time_step() const { return duration() / static_cast<double>(sample_count - 1); }
};

/// One generated sample. `direction` is the tool axis in the work frame.
struct TimedOrientation {
  double t = 0.0;
  double path_angle = 0.0;
  ToolOrientation direction;
};

std::vector<TimedOrientation> traj_semicircle(const TrajectorySpec& spec);
std::vector<TimedOrientation> traj_circle(const TrajectorySpec& spec);

/// Dispatches on spec.kind.
std::vector<TimedOrientation> generate_trajectory(const TrajectorySpec& spec);

/// Tool axes rotated into the base frame R1 of the given wrist.
std::vector<ToolOrientation> to_base_frame(std::span<const TimedOrientation> samples,
                                           const WristGeometry& geometry);

}  // namespace orthowrist
