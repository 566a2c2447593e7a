#include "orthowrist/analysis.hpp"

#include "orthowrist/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>

namespace orthowrist {

namespace {

std::string describe(const TrajectorySpec& spec) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s gamma=%.6g deg R=%.6g m", to_string(spec.kind).data(),
                spec.gamma * 180.0 / std::numbers::pi, spec.radius);
  return buf;
}

// Componentwise central difference of a sampled vector signal.
std::vector<Vec3> differentiate(const std::vector<Vec3>& values, double dt) {
  std::vector<Vec3> out(values.size());
  for (int k = 0; k < 3; ++k) {
    TimeSeries s{dt, {}};
    s.values.reserve(values.size());
    for (const Vec3& v : values) s.values.push_back(v[k]);
    const TimeSeries d = central_difference(s);
    for (std::size_t i = 0; i < values.size(); ++i) out[i][k] = d.values[i];
  }
  return out;
}

// Runs job(i) for i in [0, n) on a small pool; results land by index, so the
// output order never depends on scheduling. The lowest failing index wins.
template <typename Job>
void run_indexed(std::size_t n, unsigned workers, Job job) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            job(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

[[noreturn]] void rethrow_with(const std::string& context) {
  try {
    throw;
  } catch (const WristError& e) {
    throw WristError(e.category(), context + ": " + e.what());
  }
}

}  // namespace

void WristModel::validate() const {
  geometry.validate();
  bodies.validate(geometry);
  for (const MotorSpec& m : motors) m.validate();
  if (!gravity_work.allFinite()) {
    throw WristError(ErrorCategory::invalid_input, "gravity must be finite");
  }
}

Vec3 WristModel::gravity_base() const { return geometry.base_from_work() * gravity_work; }

std::vector<SampleResult> evaluate_samples(std::span<const ToolOrientation> samples, double dt,
                                           const WristModel& model, const CuttingLoad& load,
                                           GatePolicy gate) {
  model.validate();
  load.validate();
  const std::vector<JointState> profile =
      trajectory_joint_profiles(samples, dt, model.geometry);

  std::vector<Vec3> v(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].vector();
  const std::vector<Vec3> v_dot = differentiate(v, dt);
  const std::vector<Vec3> v_ddot = differentiate(v_dot, dt);
  const Vec3 gravity = model.gravity_base();

  std::vector<SampleResult> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SampleResult& r = out[i];
    r.t = profile[i].t;
    r.profile = profile[i];
    try {
      r.state = joint_state_from_tool_motion(profile[i].angles, v_dot[i], v_ddot[i],
                                             model.geometry, r.t);
      const MechanismMotion motion = body_motion(r.state, model.geometry, model.bodies);
      const LinearSystem system = assemble_system(motion, model.bodies, gravity, load);
      r.solution = gate == GatePolicy::enforce ? solve_wrenches(system)
                                               : solve_wrenches_unchecked(system);
      r.power_residual = power_balance_residual(r.state, r.solution, motion, model.bodies,
                                                gravity, load);
    } catch (const WristError&) {
      rethrow_with("sample " + std::to_string(i));
    }
    for (int j = 0; j < 2; ++j) {
      r.motor_torque[j] = reflected_motor_torque(r.solution.tau[j], r.state.accels[j],
                                                 model.motors[j]);
      r.motor_power[j] = r.motor_torque[j] * r.state.rates[j];
    }
  }
  return out;
}

std::vector<SampleResult> evaluate_trajectory(const TrajectorySpec& spec, const WristModel& model,
                                              const CuttingLoad& load, GatePolicy gate) {
  spec.validate();
  const auto timed = generate_trajectory(spec);
  const auto base = to_base_frame(timed, model.geometry);
  auto out = evaluate_samples(base, spec.time_step(), model, load, gate);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].t = timed[i].t;
  return out;
}

PeakRecord extract_peaks(const TrajectorySpec& spec, std::span<const SampleResult> samples) {
  PeakRecord p;
  p.gamma = spec.gamma;
  p.radius = spec.radius;
  for (const SampleResult& s : samples) {
    for (int j = 0; j < 4; ++j) {
      p.max_rates[j] = std::max(p.max_rates[j], std::abs(s.profile.rates[j]));
      p.max_accels[j] = std::max(p.max_accels[j], std::abs(s.profile.accels[j]));
    }
    for (int j = 0; j < 2; ++j) {
      p.max_torques[j] = std::max(p.max_torques[j], std::abs(s.motor_torque[j]));
      p.max_powers[j] = std::max(p.max_powers[j], std::abs(s.motor_power[j]));
    }
  }
  return p;
}

std::vector<PeakRecord> sweep_peaks(std::span<const TrajectorySpec> specs, const WristModel& model,
                                    const CuttingLoad& load, unsigned workers) {
  model.validate();
  std::vector<PeakRecord> out(specs.size());
  run_indexed(specs.size(), workers, [&](std::size_t i) {
    try {
      out[i] = extract_peaks(specs[i], evaluate_trajectory(specs[i], model, load));
    } catch (const WristError&) {
      rethrow_with("spec " + std::to_string(i) + " (" + describe(specs[i]) + ")");
    }
  });
  return out;
}

std::vector<TrajectorySpec> grid_specs(std::span<const double> gammas,
                                       std::span<const double> radii,
                                       const TrajectorySpec& base) {
  std::vector<TrajectorySpec> out;
  out.reserve(gammas.size() * radii.size());
  for (double g : gammas) {
    for (double r : radii) {
      TrajectorySpec s = base;
      s.gamma = g;
      s.radius = r;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<ForcePoint> force_sweep(const TrajectorySpec& base, std::span<const double> forces,
                                    double lever, const WristModel& model, unsigned workers) {
  for (double f : forces) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw WristError(ErrorCategory::invalid_input, "cutting force values must be >= 0");
    }
  }
  model.validate();
  std::vector<ForcePoint> out(forces.size());
  run_indexed(forces.size(), workers, [&](std::size_t i) {
    const CuttingLoad load = CuttingLoad::equal(forces[i], lever);
    try {
      const PeakRecord p = extract_peaks(base, evaluate_trajectory(base, model, load));
      out[i] = ForcePoint{forces[i], lever, p.max_torques};
    } catch (const WristError&) {
      rethrow_with("Fc=" + std::to_string(forces[i]) + " (" + describe(base) + ")");
    }
  });
  return out;
}

std::string_view to_string(TorqueClass c) noexcept {
  switch (c) {
    case TorqueClass::continuous_ok: return "continuous-ok";
    case TorqueClass::intermittent_only: return "intermittent-only";
    case TorqueClass::infeasible: return "infeasible";
  }
  return "unknown";
}

std::string_view to_string(SpeedClass c) noexcept {
  switch (c) {
    case SpeedClass::ok: return "ok";
    case SpeedClass::over_nominal: return "over-nominal";
    case SpeedClass::over_max: return "over-max";
  }
  return "unknown";
}

TorqueClass classify_torque(double peak_torque, const MotorSpec& motor) {
  const double t = std::abs(peak_torque);
  if (t <= motor.continuous_torque) return TorqueClass::continuous_ok;
  if (t <= motor.max_torque) return TorqueClass::intermittent_only;
  return TorqueClass::infeasible;
}

SpeedClass classify_speed(double peak_joint_rate, const MotorSpec& motor) {
  const double w = std::abs(peak_joint_rate) * motor.reduction_ratio;
  if (w <= motor.nominal_speed) return SpeedClass::ok;
  if (w <= motor.max_speed) return SpeedClass::over_nominal;
  return SpeedClass::over_max;
}

bool FeasibilityReport::feasible() const {
  return std::all_of(actuators.begin(), actuators.end(), [](const ActuatorFeasibility& a) {
    return a.torque != TorqueClass::infeasible && a.speed != SpeedClass::over_max;
  });
}

FeasibilityReport motor_feasibility(const PeakRecord& peaks, std::span<const MotorSpec, 2> motors) {
  FeasibilityReport report;
  for (std::size_t i = 0; i < 2; ++i) {
    const MotorSpec& m = motors[i];
    ActuatorFeasibility& a = report.actuators[i];
    a.peak_torque = peaks.max_torques[i];
    a.peak_rate = peaks.max_rates[i];
    a.torque = classify_torque(a.peak_torque, m);
    a.speed = classify_speed(a.peak_rate, m);
    a.continuous_margin = m.continuous_torque - a.peak_torque;
    a.max_margin = m.max_torque - a.peak_torque;
    a.speed_margin = m.nominal_speed - a.peak_rate * m.reduction_ratio;
  }
  return report;
}

}  // namespace orthowrist
