#include "orthowrist/trajectory.hpp"

#include "orthowrist/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace orthowrist {

namespace {

void spec_error(const std::string& message) {
  throw WristError(ErrorCategory::invalid_spec, message);
}

std::vector<TimedOrientation> sample_path(const TrajectorySpec& spec, auto&& direction_at) {
  const std::size_t n = spec.sample_count;
  const double start = spec.start_angle();
  const double span = spec.angular_span();
  const double dt = spec.time_step();
  std::vector<TimedOrientation> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
    const double delta = start + span * frac;
    out.push_back({static_cast<double>(k) * dt, delta, direction_at(delta)});
  }
  return out;
}

}  // namespace

std::string_view to_string(TrajectoryKind kind) noexcept {
  switch (kind) {
    case TrajectoryKind::semicircle_yz: return "semicircle";
    case TrajectoryKind::circle_xy: return "circle";
  }
  return "unknown";
}

void TrajectorySpec::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) spec_error("radius must be > 0");
  if (!(tool_speed > 0.0) || !std::isfinite(tool_speed)) spec_error("tool speed must be > 0");
  if (sample_count < 3) spec_error("sample_count must be >= 3");
  if (kind == TrajectoryKind::circle_xy && !(gamma > 0.0 && gamma < std::numbers::pi / 2)) {
    spec_error("circle trajectory needs 0 < gamma < pi/2");
  }
}

double TrajectorySpec::start_angle() const {
  return kind == TrajectoryKind::semicircle_yz ? std::numbers::pi / 6 : 0.0;
}

double TrajectorySpec::angular_span() const {
  return kind == TrajectoryKind::semicircle_yz ? 2.0 * std::numbers::pi / 3 : 2.0 * std::numbers::pi;
}

std::vector<TimedOrientation> traj_semicircle(const TrajectorySpec& spec) {
  if (spec.kind != TrajectoryKind::semicircle_yz) spec_error("traj_semicircle needs a semicircle spec");
  spec.validate();
  // The sweep angle psi of the semicircle does not enter the tool axis.
  return sample_path(spec, [](double d) {
    return ToolOrientation::normalized(Vec3(0.0, -std::sin(d), -std::cos(d)));
  });
}

std::vector<TimedOrientation> traj_circle(const TrajectorySpec& spec) {
  if (spec.kind != TrajectoryKind::circle_xy) spec_error("traj_circle needs a circle spec");
  spec.validate();
  const double sg = std::sin(spec.gamma);
  const double vz = -std::cos(spec.gamma);
  return sample_path(spec, [sg, vz](double d) {
    return ToolOrientation::from_unit(Vec3(sg * std::cos(d), sg * std::sin(d), vz));
  });
}

std::vector<TimedOrientation> generate_trajectory(const TrajectorySpec& spec) {
  return spec.kind == TrajectoryKind::semicircle_yz ? traj_semicircle(spec) : traj_circle(spec);
}

std::vector<ToolOrientation> to_base_frame(std::span<const TimedOrientation> samples,
                                           const WristGeometry& geometry) {
  const RotationMatrix rot = geometry.base_from_work();
  std::vector<ToolOrientation> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(ToolOrientation::normalized(rot * s.direction.vector()));
  return out;
}

}  // namespace orthowrist
