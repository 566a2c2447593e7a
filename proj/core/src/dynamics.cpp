#include "orthowrist/dynamics.hpp"

#include "orthowrist/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace orthowrist {

namespace {

constexpr double kPlacementTolerance = 1e-9;

int body_row(BodyKind kind) { return 6 * static_cast<int>(kind); }

std::string body_label(BodyKind kind) { return std::string(to_string(kind)); }

bool finite(const Vec3& v) { return v.allFinite(); }

// Distance of `p` from the line through the origin along unit `axis`.
double off_axis(const Vec3& p, const Vec3& axis) { return p.cross(axis).norm(); }

// Terminal-frame basis used for the revolute wrench and the cutting force:
// (e3, e5 made orthogonal to e3, their cross product).
std::array<Vec3, 3> terminal_basis(const MechanismMotion& motion) {
  const Vec3& e3 = motion.axis(3);
  const Vec3 u = (motion.axis(5) - motion.axis(5).dot(e3) * e3).normalized();
  return {e3, u, e3.cross(u)};
}

Mat3 world_inertia(const BodyMotion& m, const BodyParams& body) {
  const Mat3& r = m.orientation.matrix();
  return r * body.inertia * r.transpose();
}

}  // namespace

std::string_view to_string(BodyKind kind) noexcept {
  switch (kind) {
    case BodyKind::proximal1: return "proximal-1";
    case BodyKind::proximal2: return "proximal-2";
    case BodyKind::terminal: return "terminal";
    case BodyKind::distal: return "distal";
  }
  return "unknown";
}

void BodyParams::validate() const {
  const std::string who = body_label(kind);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw WristError(ErrorCategory::invalid_input, who + ".mass must be positive");
  }
  if (!finite(com_offset) || !inertia.allFinite()) {
    throw WristError(ErrorCategory::invalid_input, who + ": non-finite mass properties");
  }
  const double scale = std::max(inertia.cwiseAbs().maxCoeff(), 1e-300);
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw WristError(ErrorCategory::invalid_input, who + ".inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw WristError(ErrorCategory::invalid_input, who + ".inertia must be positive definite");
  }
  for (const auto& [name, p] : force_points) {
    if (!finite(p)) {
      throw WristError(ErrorCategory::invalid_input, who + ".points." + name + " is not finite");
    }
  }
  auto require = [&](std::string_view name) {
    if (force_points.find(name) == force_points.end()) {
      throw WristError(ErrorCategory::invalid_input,
                       who + " is missing force point '" + std::string(name) + "'");
    }
  };
  switch (kind) {
    case BodyKind::proximal1:
    case BodyKind::proximal2: require(point_names::base); break;
    case BodyKind::terminal:
      require(point_names::revolute);
      require(point_names::spherical);
      break;
    case BodyKind::distal: require(point_names::planar); break;
  }
}

const Vec3& BodyParams::force_point(std::string_view name) const {
  auto it = force_points.find(name);
  if (it == force_points.end()) {
    throw WristError(ErrorCategory::invalid_input,
                     body_label(kind) + " has no force point '" + std::string(name) + "'");
  }
  return it->second;
}

void BodySet::validate(const WristGeometry& geometry) const {
  for (BodyKind kind : kAllBodies) {
    const BodyParams& body = (*this)[kind];
    if (body.kind != kind) {
      throw WristError(ErrorCategory::invalid_input,
                       "body slot " + body_label(kind) + " holds " + body_label(body.kind));
    }
    body.validate();
  }
  const Vec3 z = Vec3::UnitZ();
  for (BodyKind kind : {BodyKind::proximal1, BodyKind::proximal2}) {
    if (off_axis((*this)[kind].force_point(point_names::base), z) > kPlacementTolerance) {
      throw WristError(ErrorCategory::invalid_input,
                       body_label(kind) + ".points.base must lie on the base axis (body Z)");
    }
  }
  const BodyParams& terminal = (*this)[BodyKind::terminal];
  const double a3 = geometry.alpha[3];
  const Vec3 e3_local(0.0, std::sin(a3), std::cos(a3));
  if (off_axis(terminal.force_point(point_names::revolute), e3_local) > kPlacementTolerance) {
    throw WristError(ErrorCategory::invalid_input,
                     "terminal.points.revolute must lie on the e3 axis");
  }
  if (off_axis(terminal.force_point(point_names::spherical), z) > kPlacementTolerance) {
    throw WristError(ErrorCategory::invalid_input,
                     "terminal.points.spherical must lie on the tool axis (body Z)");
  }
}

BodySet default_bodies() {
  BodySet set;
  auto make = [](BodyKind kind, double mass, Vec3 com, Vec3 principal) {
    BodyParams b;
    b.kind = kind;
    b.mass = mass;
    b.com_offset = com;
    b.inertia = principal.asDiagonal();
    return b;
  };
  set[BodyKind::proximal1] =
      make(BodyKind::proximal1, 0.8, {0.0, -0.06, 0.06}, {2.0e-3, 2.0e-3, 1.5e-3});
  set[BodyKind::proximal1].force_points.emplace(point_names::base, Vec3(0.0, 0.0, 0.10));

  set[BodyKind::proximal2] =
      make(BodyKind::proximal2, 1.0, {0.0, -0.06, 0.06}, {2.5e-3, 2.5e-3, 2.0e-3});
  set[BodyKind::proximal2].force_points.emplace(point_names::base, Vec3(0.0, 0.0, 0.10));

  set[BodyKind::terminal] =
      make(BodyKind::terminal, 0.6, {0.0, 0.03, 0.05}, {3.0e-3, 3.0e-3, 1.0e-3});
  set[BodyKind::terminal].force_points.emplace(point_names::revolute, Vec3(0.0, 0.08, 0.0));
  set[BodyKind::terminal].force_points.emplace(point_names::spherical, Vec3(0.0, 0.0, 0.07));

  // Distal offsets are taken from the spherical centre, in the R4 frame.
  set[BodyKind::distal] = make(BodyKind::distal, 0.4, {0.0, 0.0, 0.02}, {1.0e-3, 1.0e-3, 5.0e-4});
  set[BodyKind::distal].force_points.emplace(point_names::planar, Vec3(0.0, 0.0, 0.09));
  return set;
}

void MotorSpec::validate() const {
  const std::array<std::pair<const char*, double>, 7> fields{{
      {"rotor_inertia", rotor_inertia},
      {"reduction_ratio", reduction_ratio},
      {"nominal_speed", nominal_speed},
      {"max_speed", max_speed},
      {"max_torque", max_torque},
      {"continuous_torque", continuous_torque},
      {"rated_power", rated_power},
  }};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw WristError(ErrorCategory::invalid_input, std::string("motor.") + name + " must be positive");
    }
  }
  if (max_torque < continuous_torque) {
    throw WristError(ErrorCategory::invalid_input, "motor.max_torque is below continuous_torque");
  }
  if (max_speed < nominal_speed) {
    throw WristError(ErrorCategory::invalid_input, "motor.max_speed is below nominal_speed");
  }
}

CuttingLoad CuttingLoad::equal(double force, double lever) {
  return CuttingLoad{Vec3::Constant(force), lever};
}

void CuttingLoad::validate() const {
  if (!finite(components)) {
    throw WristError(ErrorCategory::invalid_input, "cutting force components must be finite");
  }
  if (!(lever >= 0.0) || !std::isfinite(lever)) {
    throw WristError(ErrorCategory::invalid_input, "cutting lever must be finite and >= 0");
  }
}

MechanismMotion body_motion(const JointState& state, const WristGeometry& geometry,
                            const BodySet& bodies) {
  const auto& q = state.angles.theta;
  const auto& qd = state.rates;
  const auto& qdd = state.accels;
  const std::array<double, 2> leg1_angles{q[0], q[2]};
  const std::array<double, 2> leg2_angles{q[1], q[3]};
  const LegChain leg1 = chain_frames(leg1_angles, geometry, Leg::one);
  const LegChain leg2 = chain_frames(leg2_angles, geometry, Leg::two);

  const double gap = (leg1.axes[2] - leg2.axes[2]).norm();
  if (!(gap <= kClosureTolerance)) {
    throw WristError(ErrorCategory::inconsistent_state,
                     "legs disagree on the tool axis by " + std::to_string(gap));
  }

  MechanismMotion out;
  const Vec3& e1 = leg1.axes[0];
  const Vec3& e2 = leg2.axes[0];
  const Vec3& e3 = leg1.axes[1];
  const Vec3& e4 = leg2.axes[1];
  const Vec3& e5 = leg1.axes[2];
  out.axes = {e1, e2, e3, e4, e5};
  out.actuator_rates = {qd[0], qd[1]};

  auto place = [&](BodyMotion& m, const BodyParams& body) {
    m.com_position = m.origin + m.orientation * body.com_offset;
    const Vec3 r = m.com_position;
    m.com_velocity = m.omega.cross(r);
    m.com_accel = m.alpha.cross(r) + m.omega.cross(m.omega.cross(r));
  };

  BodyMotion& p1 = out.bodies[0];
  p1.orientation = leg1.frames[1] * elementary_rotation(Axis::x, -geometry.alpha[1]);
  p1.omega = qd[0] * e1;
  p1.alpha = qdd[0] * e1;
  place(p1, bodies[BodyKind::proximal1]);

  BodyMotion& p2 = out.bodies[1];
  p2.orientation = leg2.frames[1] * elementary_rotation(Axis::x, -geometry.alpha[2]);
  p2.omega = qd[1] * e2;
  p2.alpha = qdd[1] * e2;
  place(p2, bodies[BodyKind::proximal2]);

  BodyMotion& t = out.bodies[2];
  t.orientation = leg1.frames[2];
  t.omega = qd[0] * e1 + qd[2] * e3;
  t.alpha = qdd[0] * e1 + qdd[2] * e3 + qd[0] * qd[2] * e1.cross(e3);
  place(t, bodies[BodyKind::terminal]);

  // The distal keeps the proximal-2 orientation (no spin about e4 relative to
  // it) and is carried by the spherical centre, which rides on the terminal.
  BodyMotion& d = out.bodies[3];
  d.orientation = leg2.frames[1];
  d.omega = p2.omega;
  d.alpha = p2.alpha;
  const Vec3 centre = t.orientation * bodies[BodyKind::terminal].force_point(point_names::spherical);
  const Vec3 centre_vel = t.omega.cross(centre);
  const Vec3 centre_acc = t.alpha.cross(centre) + t.omega.cross(centre_vel);
  d.origin = centre;
  const Vec3 rel = d.orientation * bodies[BodyKind::distal].com_offset;
  d.com_position = centre + rel;
  d.com_velocity = centre_vel + d.omega.cross(rel);
  d.com_accel = centre_acc + d.alpha.cross(rel) + d.omega.cross(d.omega.cross(rel));
  return out;
}

const std::array<std::string_view, kUnknownCount>& unknown_labels() {
  static const std::array<std::string_view, kUnknownCount> labels{
      "G.x",  "G.y",  "G.z",    "P.x",  "P.y",    "P.e1",  "E.x",  "E.y",
      "E.z",  "R.x",  "R.y",    "R.e2", "A.e3",   "A.e5",  "A.e3xe5", "M.e5",
      "M.e3xe5", "B.e3", "B.e5", "B.e3xe5", "D.e4", "N.x4", "N.y4"};
  return labels;
}

LoadWrench cutting_wrench(const MechanismMotion& motion, const CuttingLoad& load) {
  const auto basis = terminal_basis(motion);
  LoadWrench w;
  w.point = load.lever * motion.axis(5);
  w.force = load.components[0] * basis[0] + load.components[1] * basis[1] +
            load.components[2] * basis[2];
  return w;
}

LinearSystem assemble_system(const MechanismMotion& motion, const BodySet& bodies,
                             const Vec3& gravity, const CuttingLoad& load) {
  LinearSystem sys;
  sys.matrix.setZero();
  sys.rhs.setZero();
  sys.actuator_rates = motion.actuator_rates;

  // Each unknown acts with + on `child` and - on `parent` (the base is ground).
  auto force = [&](int col, BodyKind child, const BodyKind* parent, const Vec3& dir,
                   const Vec3& at) {
    const Vec3 moment = at.cross(dir);
    sys.matrix.block<3, 1>(body_row(child), col) += dir;
    sys.matrix.block<3, 1>(body_row(child) + 3, col) += moment;
    if (parent) {
      sys.matrix.block<3, 1>(body_row(*parent), col) -= dir;
      sys.matrix.block<3, 1>(body_row(*parent) + 3, col) -= moment;
    }
  };
  auto couple = [&](int col, BodyKind child, const BodyKind* parent, const Vec3& dir) {
    sys.matrix.block<3, 1>(body_row(child) + 3, col) += dir;
    if (parent) sys.matrix.block<3, 1>(body_row(*parent) + 3, col) -= dir;
  };

  const BodyMotion& p1 = motion[BodyKind::proximal1];
  const BodyMotion& p2 = motion[BodyKind::proximal2];
  const BodyMotion& t = motion[BodyKind::terminal];
  const BodyMotion& d = motion[BodyKind::distal];
  const Mat3& r1 = p1.orientation.matrix();
  const Mat3& r2 = p2.orientation.matrix();
  const Mat3& r4 = d.orientation.matrix();

  // Base <-> proximal-1.
  const Vec3 g_at = p1.orientation * bodies[BodyKind::proximal1].force_point(point_names::base);
  for (int k = 0; k < 3; ++k) force(k, BodyKind::proximal1, nullptr, Vec3::Unit(k), g_at);
  couple(3, BodyKind::proximal1, nullptr, r1.col(0));
  couple(4, BodyKind::proximal1, nullptr, r1.col(1));
  couple(5, BodyKind::proximal1, nullptr, motion.axis(1));

  // Base <-> proximal-2.
  const Vec3 e_at = p2.orientation * bodies[BodyKind::proximal2].force_point(point_names::base);
  for (int k = 0; k < 3; ++k) force(6 + k, BodyKind::proximal2, nullptr, Vec3::Unit(k), e_at);
  couple(9, BodyKind::proximal2, nullptr, r2.col(0));
  couple(10, BodyKind::proximal2, nullptr, r2.col(1));
  couple(11, BodyKind::proximal2, nullptr, motion.axis(2));

  // Proximal-1 <-> terminal, revolute about e3.
  const auto tb = terminal_basis(motion);
  const BodyKind prox1 = BodyKind::proximal1;
  const Vec3 a_at = t.orientation * bodies[BodyKind::terminal].force_point(point_names::revolute);
  for (int k = 0; k < 3; ++k) force(12 + k, BodyKind::terminal, &prox1, tb[k], a_at);
  couple(15, BodyKind::terminal, &prox1, tb[1]);
  couple(16, BodyKind::terminal, &prox1, tb[2]);

  // Distal <-> terminal, spherical.
  const BodyKind dist = BodyKind::distal;
  for (int k = 0; k < 3; ++k) force(17 + k, BodyKind::terminal, &dist, tb[k], d.origin);

  // Proximal-2 <-> distal, planar with normal e4.
  const BodyKind prox2 = BodyKind::proximal2;
  const Vec3 d_at = d.origin + d.orientation * bodies[BodyKind::distal].force_point(point_names::planar);
  force(20, BodyKind::distal, &prox2, motion.axis(4), d_at);
  couple(21, BodyKind::distal, &prox2, r4.col(0));
  couple(22, BodyKind::distal, &prox2, r4.col(1));

  // Right-hand side: inertial minus external, moments about the wrist centre.
  for (BodyKind kind : kAllBodies) {
    const BodyParams& body = bodies[kind];
    const BodyMotion& m = motion[kind];
    const Mat3 iw = world_inertia(m, body);
    const Vec3 ma = body.mass * m.com_accel;
    const Vec3 mg = body.mass * gravity;
    const Vec3 h_dot = iw * m.alpha + m.omega.cross(iw * m.omega) + m.com_position.cross(ma);
    sys.rhs.segment<3>(body_row(kind)) = ma - mg;
    sys.rhs.segment<3>(body_row(kind) + 3) = h_dot - m.com_position.cross(mg);
  }
  const LoadWrench w = cutting_wrench(motion, load);
  sys.rhs.segment<3>(body_row(BodyKind::terminal)) -= w.force;
  sys.rhs.segment<3>(body_row(BodyKind::terminal) + 3) -= w.point.cross(w.force);
  return sys;
}

double DynamicsSolution::reaction(std::string_view label) const {
  const auto& labels = unknown_labels();
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw WristError(ErrorCategory::invalid_input, "unknown reaction '" + std::string(label) + "'");
  }
  return reactions[it - labels.begin()];
}

DynamicsSolution solve_wrenches_unchecked(const LinearSystem& system) {
  const Eigen::MatrixXd a = system.matrix;
  const Eigen::VectorXd b = system.rhs;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd x = cod.solve(b);

  DynamicsSolution s;
  s.reactions = x;
  const double bnorm = b.norm();
  const double rnorm = (a * x - b).norm();
  s.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  for (int i = 0; i < 2; ++i) {
    s.tau[i] = x[kActuatorColumns[i]];
    s.power[i] = s.tau[i] * system.actuator_rates[i];
  }
  return s;
}

DynamicsSolution solve_wrenches(const LinearSystem& system) {
  DynamicsSolution s = solve_wrenches_unchecked(system);
  if (!(s.residual < kResidualGate)) {
    throw WristError(ErrorCategory::model_inconsistency,
                     "wrench solve residual " + std::to_string(s.residual) +
                         " exceeds the consistency gate");
  }
  return s;
}

double reflected_motor_torque(double tau_joint, double joint_accel, const MotorSpec& motor) {
  return tau_joint +
         motor.rotor_inertia * motor.reduction_ratio * motor.reduction_ratio * joint_accel;
}

double power_balance_residual(const JointState& state, const DynamicsSolution& solution,
                              const MechanismMotion& motion, const BodySet& bodies,
                              const Vec3& gravity, const CuttingLoad& load) {
  double ke_rate = 0.0;
  double gravity_power = 0.0;
  for (BodyKind kind : kAllBodies) {
    const BodyParams& body = bodies[kind];
    const BodyMotion& m = motion[kind];
    const Mat3 iw = world_inertia(m, body);
    ke_rate += body.mass * m.com_accel.dot(m.com_velocity) + m.omega.dot(iw * m.alpha);
    gravity_power += body.mass * gravity.dot(m.com_velocity);
  }
  const LoadWrench w = cutting_wrench(motion, load);
  const double cutting_power = w.force.dot(motion[BodyKind::terminal].omega.cross(w.point));
  const double actuator_power =
      solution.tau[0] * state.rates[0] + solution.tau[1] * state.rates[1];
  return std::abs(actuator_power + gravity_power + cutting_power - ke_rate) /
         std::max(1.0, std::abs(ke_rate));
}

}  // namespace orthowrist
