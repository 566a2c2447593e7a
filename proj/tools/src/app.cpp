#include "wristctl/app.hpp"

#include "wristctl/config.hpp"
#include "wristctl/csv.hpp"

#include "orthowrist/analysis.hpp"
#include "orthowrist/error.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

namespace wristctl {

using namespace orthowrist;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Globals {
  std::string config_path;
  std::optional<std::size_t> samples;
  std::string out_path;
};

struct TrajOptions {
  std::string kind = "circle";
  double gamma_deg = 45.0;
  double radius = 0.25;
  std::optional<double> speed;
};

struct LoadOptions {
  double fc = 0.0;
  double lc = 0.0;
};

TrajectoryKind parse_kind(const std::string& name) {
  if (name == "circle") return TrajectoryKind::circle_xy;
  if (name == "semicircle") return TrajectoryKind::semicircle_yz;
  throw WristError(ErrorCategory::invalid_input, "unknown trajectory '" + name + "'");
}

Config resolve_config(const Globals& g) {
  Config cfg = g.config_path.empty() ? default_config() : load_config(g.config_path);
  if (g.samples) {
    if (*g.samples < 3) throw WristError(ErrorCategory::invalid_input, "--samples must be >= 3");
    cfg.sample_count = *g.samples;
  }
  return cfg;
}

TrajectorySpec make_spec(const TrajOptions& t, const Config& cfg) {
  TrajectorySpec s;
  s.kind = parse_kind(t.kind);
  s.gamma = t.gamma_deg * kDeg;
  s.radius = t.radius;
  s.tool_speed = t.speed.value_or(cfg.tool_speed);
  s.sample_count = cfg.sample_count;
  s.validate();
  return s;
}

void add_traj_options(CLI::App* cmd, TrajOptions& t) {
  cmd->add_option("--traj", t.kind, "Trajectory: circle or semicircle")
      ->check(CLI::IsMember({"circle", "semicircle"}))
      ->capture_default_str();
  cmd->add_option("--gamma", t.gamma_deg, "Cone half-angle, degrees (circle)")->capture_default_str();
  cmd->add_option("--radius", t.radius, "Path radius, m")->capture_default_str();
  cmd->add_option("--speed", t.speed, "Tool speed Vp, m/s (config default)");
}

void add_load_options(CLI::App* cmd, LoadOptions& l) {
  cmd->add_option("--fc", l.fc, "Equal cutting-force components, N")->capture_default_str();
  cmd->add_option("--lc", l.lc, "Tool tip distance from the wrist centre, m")->capture_default_str();
}

std::string num(double v) { return format_number(v); }

// Writes to --out when given, otherwise to the command's output stream.
void emit(const Globals& g, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (g.out_path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(g.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw WristError(ErrorCategory::invalid_input, "cannot write '" + g.out_path + "'");
  body(file);
  if (!file) throw WristError(ErrorCategory::invalid_input, "failed writing '" + g.out_path + "'");
}

Vec3 to_frame(const Vec3& v_base, const std::string& frame, const WristGeometry& geometry) {
  return frame == "work" ? Vec3(geometry.base_from_work().transpose() * v_base) : v_base;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinematics and dynamics of a two-degree-of-freedom spherical wrist", "wristctl"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--samples", g.samples, "Samples per trajectory");
  app.add_option("--out", g.out_path, "Write output to this file instead of stdout");

  std::function<void()> action;

  // ik
  auto* ik = app.add_subcommand("ik", "Joint angles for a tool orientation");
  std::vector<double> ik_v;
  std::optional<double> ik_pan, ik_tilt;
  std::string ik_frame = "base";
  auto* v_opt = ik->add_option("--v", ik_v, "Tool axis x,y,z")->delimiter(',')->expected(3);
  auto* pan_opt = ik->add_option("--pan", ik_pan, "Pan angle in the base frame, degrees");
  auto* tilt_opt = ik->add_option("--tilt", ik_tilt, "Tilt angle in the base frame, degrees");
  pan_opt->needs(tilt_opt);
  tilt_opt->needs(pan_opt);
  v_opt->excludes(pan_opt)->excludes(tilt_opt);
  ik->add_option("--frame", ik_frame, "Frame of --v: base or work")
      ->check(CLI::IsMember({"base", "work"}))
      ->capture_default_str();
  ik->callback([&] {
    action = [&] {
      const Config cfg = resolve_config(g);
      const WristGeometry& geo = cfg.model.geometry;
      ToolOrientation v;
      if (!ik_v.empty()) {
        const Vec3 raw(ik_v[0], ik_v[1], ik_v[2]);
        const Vec3 base = ik_frame == "work" ? Vec3(geo.base_from_work() * raw) : raw;
        v = ToolOrientation::normalized(base);
      } else if (ik_pan) {
        v = vector_from_pan_tilt(*ik_pan * kDeg, *ik_tilt * kDeg);
      } else {
        throw WristError(ErrorCategory::invalid_input, "ik needs --v or --pan/--tilt");
      }
      const PanTilt pt = pan_tilt_from_vector(v);
      const JointAngles q = inverse_kinematics(v, geo);
      emit(g, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"vx", "vy", "vz", "pan_deg", "tilt_deg", "theta1_rad", "theta2_rad",
                           "theta3_rad", "theta4_rad"});
        csv.row({num(v.x()), num(v.y()), num(v.z()), num(pt.pan / kDeg), num(pt.tilt / kDeg),
                 num(q[0]), num(q[1]), num(q[2]), num(q[3])});
      });
    };
  });

  // fk
  auto* fk = app.add_subcommand("fk", "Tool axis for leg-one joint angles");
  double fk_t1 = 0.0, fk_t3 = 0.0;
  std::string fk_frame = "base";
  fk->add_option("--theta1", fk_t1, "theta1, degrees")->required();
  fk->add_option("--theta3", fk_t3, "theta3, degrees")->required();
  fk->add_option("--frame", fk_frame, "Output frame: base or work")
      ->check(CLI::IsMember({"base", "work"}))
      ->capture_default_str();
  fk->callback([&] {
    action = [&] {
      const Config cfg = resolve_config(g);
      const Vec3 v = to_frame(forward_kinematics(fk_t1 * kDeg, fk_t3 * kDeg, cfg.model.geometry).vector(),
                              fk_frame, cfg.model.geometry);
      emit(g, out, [&](std::ostream& os) {
        const std::string s = "_" + fk_frame;
        CsvWriter csv(os, {"vx" + s, "vy" + s, "vz" + s});
        csv.row({num(v.x()), num(v.y()), num(v.z())});
      });
    };
  });

  // traj
  auto* traj = app.add_subcommand("traj", "Timed joint profiles along a test trajectory");
  TrajOptions traj_opts;
  add_traj_options(traj, traj_opts);
  traj->callback([&] {
    action = [&] {
      const Config cfg = resolve_config(g);
      const TrajectorySpec spec = make_spec(traj_opts, cfg);
      const auto timed = generate_trajectory(spec);
      const auto base = to_base_frame(timed, cfg.model.geometry);
      const auto prof = trajectory_joint_profiles(base, spec.time_step(), cfg.model.geometry);
      emit(g, out, [&](std::ostream& os) {
        std::vector<std::string> header{"t_s", "delta_rad", "vx_work", "vy_work", "vz_work"};
        for (int j = 1; j <= 4; ++j) header.push_back("theta" + std::to_string(j) + "_rad");
        for (int j = 1; j <= 4; ++j) header.push_back("dtheta" + std::to_string(j) + "_rad_s");
        for (int j = 1; j <= 4; ++j) header.push_back("ddtheta" + std::to_string(j) + "_rad_s2");
        CsvWriter csv(os, header);
        for (std::size_t i = 0; i < timed.size(); ++i) {
          const Vec3& d = timed[i].direction.vector();
          std::vector<std::string> row{num(timed[i].t), num(timed[i].path_angle), num(d.x()),
                                       num(d.y()), num(d.z())};
          for (int j = 0; j < 4; ++j) row.push_back(num(prof[i].angles[j]));
          for (int j = 0; j < 4; ++j) row.push_back(num(prof[i].rates[j]));
          for (int j = 0; j < 4; ++j) row.push_back(num(prof[i].accels[j]));
          csv.row(row);
        }
      });
    };
  });

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "Actuator torque and power time series");
  TrajOptions dyn_traj;
  LoadOptions dyn_load;
  bool dyn_no_gate = false;
  add_traj_options(dyn, dyn_traj);
  add_load_options(dyn, dyn_load);
  dyn->add_flag("--no-gate", dyn_no_gate,
                "Keep samples whose wrench solve exceeds the residual gate");
  dyn->callback([&] {
    action = [&] {
      const Config cfg = resolve_config(g);
      const TrajectorySpec spec = make_spec(dyn_traj, cfg);
      const CuttingLoad load = CuttingLoad::equal(dyn_load.fc, dyn_load.lc);
      const auto samples = evaluate_trajectory(spec, cfg.model, load,
                                               dyn_no_gate ? GatePolicy::report : GatePolicy::enforce);
      emit(g, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"t_s", "theta1_rad", "theta2_rad", "dtheta1_rad_s", "dtheta2_rad_s",
                           "ddtheta1_rad_s2", "ddtheta2_rad_s2", "tau1_Nm", "tau2_Nm", "P1_W",
                           "P2_W", "tau1_class", "tau2_class", "solve_residual", "power_residual"});
        for (const SampleResult& s : samples) {
          csv.row({num(s.t), num(s.state.angles[0]), num(s.state.angles[1]), num(s.state.rates[0]),
                   num(s.state.rates[1]), num(s.state.accels[0]), num(s.state.accels[1]),
                   num(s.motor_torque[0]), num(s.motor_torque[1]), num(s.motor_power[0]),
                   num(s.motor_power[1]),
                   std::string(to_string(classify_torque(s.motor_torque[0], cfg.model.motors[0]))),
                   std::string(to_string(classify_torque(s.motor_torque[1], cfg.model.motors[1]))),
                   num(s.solution.residual), num(s.power_residual)});
        }
      });
      const PeakRecord peaks = extract_peaks(spec, samples);
      for (int j = 0; j < 2; ++j) {
        err << "peak tau" << j + 1 << "_Nm=" << num(peaks.max_torques[j]) << " class="
            << to_string(classify_torque(peaks.max_torques[j], cfg.model.motors[j])) << '\n';
      }
    };
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Peak table over a (gamma, radius) grid");
  TrajOptions sweep_traj;
  std::vector<double> sweep_gammas{30.0, 45.0, 60.0};
  std::vector<double> sweep_radii{0.25, 0.15, 0.10, 0.05};
  std::vector<double> sweep_fc{0.0};
  double sweep_lc = 0.0;
  unsigned sweep_workers = 0;
  sweep->add_option("--traj", sweep_traj.kind, "Trajectory: circle or semicircle")
      ->check(CLI::IsMember({"circle", "semicircle"}))
      ->capture_default_str();
  sweep->add_option("--gamma", sweep_gammas, "Cone half-angles, degrees")->delimiter(',');
  sweep->add_option("--radius", sweep_radii, "Path radii, m")->delimiter(',');
  sweep->add_option("--speed", sweep_traj.speed, "Tool speed Vp, m/s (config default)");
  sweep->add_option("--fc", sweep_fc, "Equal cutting-force components, N")->delimiter(',');
  sweep->add_option("--lc", sweep_lc, "Tool tip distance from the wrist centre, m");
  sweep->add_option("--workers", sweep_workers, "Worker threads (0 = hardware concurrency)");
  sweep->callback([&] {
    action = [&] {
      const Config cfg = resolve_config(g);
      std::vector<double> gammas;
      for (double d : sweep_gammas) gammas.push_back(d * kDeg);
      const TrajectorySpec base = make_spec(sweep_traj, cfg);
      const auto specs = grid_specs(gammas, sweep_radii, base);
      std::vector<std::vector<PeakRecord>> by_force;
      for (double fc : sweep_fc) {
        if (!(fc >= 0.0)) throw WristError(ErrorCategory::invalid_input, "--fc values must be >= 0");
        by_force.push_back(sweep_peaks(specs, cfg.model, CuttingLoad::equal(fc, sweep_lc), sweep_workers));
      }
      emit(g, out, [&](std::ostream& os) {
        std::vector<std::string> header{"gamma_deg", "radius_m", "fc_N", "lc_m"};
        for (int j = 1; j <= 4; ++j) header.push_back("max_dtheta" + std::to_string(j) + "_rad_s");
        for (int j = 1; j <= 4; ++j) header.push_back("max_ddtheta" + std::to_string(j) + "_rad_s2");
        for (int j = 1; j <= 2; ++j) header.push_back("max_tau" + std::to_string(j) + "_Nm");
        for (int j = 1; j <= 2; ++j) header.push_back("max_P" + std::to_string(j) + "_W");
        CsvWriter csv(os, header);
        for (std::size_t i = 0; i < specs.size(); ++i) {
          for (std::size_t f = 0; f < sweep_fc.size(); ++f) {
            const PeakRecord& p = by_force[f][i];
            std::vector<std::string> row{num(sweep_gammas[i / sweep_radii.size()]), num(p.radius), num(sweep_fc[f]),
                                         num(sweep_lc)};
            for (double v : p.max_rates) row.push_back(num(v));
            for (double v : p.max_accels) row.push_back(num(v));
            for (double v : p.max_torques) row.push_back(num(v));
            for (double v : p.max_powers) row.push_back(num(v));
            csv.row(row);
          }
        }
      });
    };
  });

  // motor-check
  auto* motor = app.add_subcommand("motor-check", "Classify actuator peaks against the motors");
  TrajOptions motor_traj;
  motor_traj.gamma_deg = 60.0;
  motor_traj.radius = 0.05;
  LoadOptions motor_load;
  std::optional<double> peak_torque, peak_rate;
  add_traj_options(motor, motor_traj);
  add_load_options(motor, motor_load);
  motor->add_option("--peak-torque", peak_torque, "Classify this peak torque, N m, for both actuators");
  motor->add_option("--peak-rate", peak_rate, "Classify this peak joint rate, rad/s, for both actuators");
  motor->callback([&] {
    action = [&] {
      const Config cfg = resolve_config(g);
      PeakRecord peaks;
      if (!peak_torque || !peak_rate) {
        const TrajectorySpec spec = make_spec(motor_traj, cfg);
        peaks = extract_peaks(spec, evaluate_trajectory(spec, cfg.model,
                                                        CuttingLoad::equal(motor_load.fc, motor_load.lc)));
      }
      if (peak_torque) peaks.max_torques = {*peak_torque, *peak_torque};
      if (peak_rate) peaks.max_rates[0] = peaks.max_rates[1] = *peak_rate;
      const FeasibilityReport report = motor_feasibility(peaks, cfg.model.motors);
      emit(g, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"actuator", "peak_torque_Nm", "torque_class", "continuous_margin_Nm",
                           "max_margin_Nm", "peak_rate_rad_s", "speed_class", "speed_margin_rad_s"});
        for (std::size_t i = 0; i < 2; ++i) {
          const ActuatorFeasibility& a = report.actuators[i];
          csv.row({std::to_string(i + 1), num(a.peak_torque), std::string(to_string(a.torque)),
                   num(a.continuous_margin), num(a.max_margin), num(a.peak_rate),
                   std::string(to_string(a.speed)), num(a.speed_margin)});
        }
      });
    };
  });

  std::vector<const char*> argv{"wristctl"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: invalid-input: " << e.what() << '\n';
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const WristError& e) {
    err << "error: " << to_string(e.category()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wristctl
