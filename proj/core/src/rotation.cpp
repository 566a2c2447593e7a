#include "orthowrist/rotation.hpp"

#include "orthowrist/error.hpp"

#include <cmath>
#include <string>

namespace orthowrist {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw WristError(ErrorCategory::invalid_input, std::string(what) + " must be finite");
  }
}

}  // namespace

RotationMatrix RotationMatrix::from_matrix(const Mat3& m, double tol) {
  if (!m.allFinite()) {
    throw WristError(ErrorCategory::invalid_input, "rotation matrix has non-finite entries");
  }
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho > tol || std::abs(det - 1.0) > tol) {
    throw WristError(ErrorCategory::invalid_input,
                     "matrix is not a proper rotation (orthonormality error " +
                         std::to_string(ortho) + ", det " + std::to_string(det) + ")");
  }
  return RotationMatrix(m);
}

double RotationMatrix::orthonormality_error() const {
  return (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
}

RotationMatrix elementary_rotation(Axis axis, double angle) {
  require_finite(angle, "rotation angle");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  switch (axis) {
    case Axis::x:
      m << 1, 0, 0,
           0, c, -s,
           0, s, c;
      break;
    case Axis::z:
      m << c, -s, 0,
           s, c, 0,
           0, 0, 1;
      break;
  }
  return RotationMatrix::from_matrix(m);
}

RotationMatrix dh_rotation(double theta, double alpha) {
  return elementary_rotation(Axis::z, theta) * elementary_rotation(Axis::x, alpha);
}

void WristGeometry::validate() const {
  for (double a : alpha) require_finite(a, "geometry.alpha");
  for (double t : home_thetas) require_finite(t, "geometry.home");
  require_finite(mounting_azimuth, "geometry.mounting_azimuth");
  if (!(tool_length > 0.0) || !std::isfinite(tool_length)) {
    throw WristError(ErrorCategory::invalid_input, "geometry.tool_length must be > 0");
  }
}

RotationMatrix WristGeometry::base_from_work() const {
  const double c = std::cos(mounting_azimuth);
  const double s = std::sin(mounting_azimuth);
  // Rows are the base axes written in the work frame: X1 = e2 (horizontal),
  // Y1 = work up, Z1 = e1 (horizontal at the mounting azimuth).
  Mat3 m;
  m << -s, c, 0,
        0, 0, 1,
        c, s, 0;
  return RotationMatrix::from_matrix(m);
}

RotationMatrix leg_base_frame(Leg leg, const WristGeometry& geometry) {
  if (leg == Leg::one) return RotationMatrix{};
  // R2: Z2 = e2 at angle alpha0 from e1 inside the X1Z1 plane, Y2 = Y1.
  // That is a rotation by alpha0 about Y1, built from the X/Z primitives.
  const double quarter = std::numbers::pi / 2;
  return elementary_rotation(Axis::z, quarter) * elementary_rotation(Axis::x, geometry.alpha[0]) *
         elementary_rotation(Axis::z, -quarter);
}

LegChain chain_frames(std::span<const double> theta, const WristGeometry& geometry, Leg leg) {
  if (theta.size() != 2) {
    throw WristError(ErrorCategory::invalid_input,
                     "chain_frames expects 2 joint angles per leg, got " +
                         std::to_string(theta.size()));
  }
  const double first_twist = leg == Leg::one ? geometry.alpha[1] : geometry.alpha[2];
  const double second_twist = leg == Leg::one ? geometry.alpha[3] : geometry.alpha[4];

  LegChain chain;
  chain.frames.reserve(3);
  chain.frames.push_back(leg_base_frame(leg, geometry));
  chain.frames.push_back(chain.frames.back() * dh_rotation(theta[0], first_twist));
  chain.frames.push_back(chain.frames.back() * dh_rotation(theta[1], second_twist));
  for (const auto& frame : chain.frames) chain.axes.push_back(frame.z_axis());
  return chain;
}

TimeSeries central_difference(const TimeSeries& series) {
  const auto& y = series.values;
  const std::size_t n = y.size();
  if (n < 3) {
    throw WristError(ErrorCategory::invalid_input,
                     "central_difference needs at least 3 samples, got " + std::to_string(n));
  }
  if (!(series.dt > 0.0) || !std::isfinite(series.dt)) {
    throw WristError(ErrorCategory::invalid_input, "time step must be positive");
  }
  const double h = series.dt;
  TimeSeries out{h, std::vector<double>(n)};
  // One-sided second-order ends, written on differences so constants give 0.
  out.values[0] = (4.0 * (y[1] - y[0]) - (y[2] - y[0])) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.values[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
  }
  out.values[n - 1] = (4.0 * (y[n - 1] - y[n - 2]) - (y[n - 1] - y[n - 3])) / (2.0 * h);
  return out;
}

std::vector<double> unwrap_angles(std::span<const double> angles) {
  std::vector<double> out(angles.begin(), angles.end());
  const double two_pi = 2.0 * std::numbers::pi;
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double step = angles[i] + offset - out[i - 1];
    offset -= two_pi * std::round(step / two_pi);
    out[i] = angles[i] + offset;
  }
  return out;
}

double principal_angle(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, two_pi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return m;
}

}  // namespace orthowrist
