#include "orthowrist/analysis.hpp"

#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

namespace {

using namespace orthowrist;

TrajectorySpec circle(double gamma_deg, double radius) {
  TrajectorySpec s;
  s.kind = TrajectoryKind::circle_xy;
  s.gamma = gamma_deg * std::numbers::pi / 180.0;
  s.radius = radius;
  return s;
}

void BM_InverseKinematics(benchmark::State& state) {
  const WristGeometry g;
  const ToolOrientation v = ToolOrientation::normalized(Vec3(0.3, -0.8, -0.2));
  for (auto _ : state) benchmark::DoNotOptimize(inverse_kinematics(v, g));
}
BENCHMARK(BM_InverseKinematics);

void BM_SolveWrenches(benchmark::State& state) {
  const WristModel model;
  const JointState s = evaluate_trajectory(circle(45, 0.25), model, CuttingLoad{})[137].state;
  const CuttingLoad load = CuttingLoad::equal(100.0, 0.11);
  for (auto _ : state) {
    const MechanismMotion m = body_motion(s, model.geometry, model.bodies);
    benchmark::DoNotOptimize(solve_wrenches(assemble_system(m, model.bodies, model.gravity_base(), load)));
  }
}
BENCHMARK(BM_SolveWrenches);

void BM_EvaluateTrajectory(benchmark::State& state) {
  const WristModel model;
  TrajectorySpec spec = circle(60, 0.05);
  spec.sample_count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_trajectory(spec, model, CuttingLoad{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateTrajectory)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_PeakSweep(benchmark::State& state) {
  const WristModel model;
  const std::vector<double> gammas{std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3};
  const std::vector<double> radii{0.25, 0.15, 0.10, 0.05};
  const auto specs = grid_specs(gammas, radii, circle(45, 1));
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_peaks(specs, model, CuttingLoad{}, workers));
}
BENCHMARK(BM_PeakSweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
