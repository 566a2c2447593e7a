#pragma once

// Rotation utilities for the concurrent-axis wrist chain: elementary and
// Denavit-Hartenberg rotations, per-leg frame composition and the sampled
// differentiation helpers used by the trajectory studies.

#include <Eigen/Dense>

#include <array>
#include <numbers>
#include <span>
#include <vector>

namespace orthowrist {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Proper orthonormal 3x3 matrix. Construction from raw data is checked.
class RotationMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  RotationMatrix() : m_(Mat3::Identity()) {}

  /// Throws invalid-input unless `m` is orthonormal with det +1 to `tol`.
  static RotationMatrix from_matrix(const Mat3& m, double tol = kTolerance);

  const Mat3& matrix() const noexcept { return m_; }
  Vec3 column(int i) const { return m_.col(i); }
  Vec3 z_axis() const { return m_.col(2); }

  RotationMatrix transpose() const { return RotationMatrix(m_.transpose()); }
  RotationMatrix operator*(const RotationMatrix& rhs) const { return RotationMatrix(m_ * rhs.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// Largest entry of |R^T R - I|.
  double orthonormality_error() const;
  double determinant() const { return m_.determinant(); }

 private:
  explicit RotationMatrix(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

enum class Axis { x, z };

/// Right-handed rotation by `angle` about the named axis.
RotationMatrix elementary_rotation(Axis axis, double angle);

/// Rz(theta) * Rx(alpha). All link lengths and offsets of the wrist vanish,
/// so a DH step reduces to this pure rotation.
RotationMatrix dh_rotation(double theta, double alpha);

/// Joint-axis twist angles, home configuration and tool length of the wrist.
///
/// `alpha[0]` is the angle between the two base axes e1 and e2; `alpha[i]`
/// (i = 1..4) is the angle between e_i and e_{i+2}. `mounting_azimuth` places
/// the base frame R1 inside the work frame (Z up, where test trajectories are
/// written): e1 is horizontal at this azimuth from the work X axis, the base
/// Y axis points up, and at the home configuration the tool points down.
struct WristGeometry {
  std::array<double, 5> alpha{std::numbers::pi / 2, std::numbers::pi / 2, std::numbers::pi / 2,
                              std::numbers::pi / 2, std::numbers::pi / 2};
  std::array<double, 4> home_thetas{-std::numbers::pi / 2, std::numbers::pi / 2,
                                    std::numbers::pi / 2, -std::numbers::pi / 2};
  double tool_length = 0.11;
  double mounting_azimuth = std::numbers::pi / 4;

  /// Throws invalid-input on non-finite entries or tool_length <= 0.
  void validate() const;

  /// Rotation taking work-frame components to base-frame (R1) components.
  RotationMatrix base_from_work() const;
};

enum class Leg { one, two };

/// Frames and joint axes of one leg, all expressed in R1.
/// Leg one: {R1, R3, R5} with axes {e1, e3, e5}.
/// Leg two: {R2, R4, R6} with axes {e2, e4, e6}; e6 closes onto e5.
struct LegChain {
  std::vector<RotationMatrix> frames;
  std::vector<Vec3> axes;
};

/// Orientation of the leg's base frame in R1 (identity for leg one).
RotationMatrix leg_base_frame(Leg leg, const WristGeometry& geometry);

/// `theta` holds the leg's two joint angles: (theta1, theta3) for leg one,
/// (theta2, theta4) for leg two.
LegChain chain_frames(std::span<const double> theta, const WristGeometry& geometry, Leg leg);

/// Uniformly sampled scalar signal.
struct TimeSeries {
  double dt = 0.0;
  std::vector<double> values;
};

/// Second-order central differences inside, second-order one-sided stencils
/// at both ends. Output has the input's length and time step.
TimeSeries central_difference(const TimeSeries& series);

/// Adds multiples of 2*pi so consecutive samples differ by at most pi.
std::vector<double> unwrap_angles(std::span<const double> angles);

/// Maps an angle into (-pi, pi].
double principal_angle(double angle);

Mat3 skew(const Vec3& v);

}  // namespace orthowrist
