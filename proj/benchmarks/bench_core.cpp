#include <benchmark/benchmark.h>

#include <degenlab/classifier.hpp>
#include <degenlab/geometry.hpp>
#include <degenlab/grid_oracle.hpp>
#include <degenlab/metric.hpp>
#include <degenlab/solver.hpp>

using namespace degenlab;

static void BM_EvalPowerLog(benchmark::State& state) {
  const Geometry g = Geometry::power_log(3, 0.5);
  double x = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.eval(x).F);
    x = (x > 0.3) ? 0.05 : x * 1.0001;
  }
}
BENCHMARK(BM_EvalPowerLog);

static void BM_EvalInversePower(benchmark::State& state) {
  const Geometry g = Geometry::inverse_power(0.5);
  double x = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.eval(x).F);
    x = (x > 0.3) ? 0.05 : x * 1.0001;
  }
}
BENCHMARK(BM_EvalInversePower);

static void BM_EvalFiniteType(benchmark::State& state) {
  const Geometry g = Geometry::finite_type(1.0);
  double x = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.eval(x).F);
    x = (x > 0.3) ? 0.05 : x * 1.0001;
  }
}
BENCHMARK(BM_EvalFiniteType);

static void BM_HeightHstar(benchmark::State& state) {
  const Geometry g = Geometry::power_log(3, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(height_hstar(g, 0.2, 1e-3));
  }
}
BENCHMARK(BM_HeightHstar);

static void BM_TurningOffset(benchmark::State& state) {
  const Geometry g = Geometry::power_log(3, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(turning_offset(g, 0.2, 0.01));
  }
}
BENCHMARK(BM_TurningOffset);

static void BM_RstarAndHeight(benchmark::State& state) {
  const Geometry g = Geometry::power_log(3, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rstar_and_height(g, 0.2, 0.004875).h);
  }
}
BENCHMARK(BM_RstarAndHeight);

static void BM_BallVolume3d(benchmark::State& state) {
  const Geometry g = Geometry::inverse_power(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_volume(g, 3, 0.05, 0.01));
  }
}
BENCHMARK(BM_BallVolume3d);

static void BM_StraightAcross3d(benchmark::State& state) {
  const Geometry g = Geometry::inverse_power(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        straight_across_integral(g, 3, {0.05, 0.0}, 0.0625).integral);
  }
}
BENCHMARK(BM_StraightAcross3d);

static void BM_DistanceField(benchmark::State& state) {
  const Geometry g = Geometry::finite_type(1.0);
  GridSpec spec;
  spec.x0 = 0.1;
  spec.y0 = -0.15;
  spec.n1 = 97;
  spec.n2 = 97;
  spec.h1 = 0.3 / 96;
  spec.h2 = 0.3 / 96;
  for (auto _ : state) {
    GridOracle oracle(g, spec);
    benchmark::DoNotOptimize(oracle.distances(0.25, 0.0).d.data());
  }
}
BENCHMARK(BM_DistanceField);

static void BM_FactoredSolve(benchmark::State& state) {
  const Geometry g = Geometry::finite_type(1.0);
  const FactoredProblem fp(g, 0.1, 0.4, -0.1, 0.1, 64, 64);
  const auto boundary = [](double a, double b) { return a * a - b * b; };
  for (auto _ : state) {
    benchmark::DoNotOptimize(fp.solve(boundary).v.data());
  }
}
BENCHMARK(BM_FactoredSolve);

static void BM_LambdaSequence(benchmark::State& state) {
  const DeltaProfile p = default_profile(Geometry::power_log(3, 0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_sequence(p, 1.0, 0.2, 64).size());
  }
}
BENCHMARK(BM_LambdaSequence);

static void BM_StructuralVerdict(benchmark::State& state) {
  const DeltaProfile p = default_profile(Geometry::inverse_power(0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(structural_verdict(p, 1.0).verdict);
  }
}
BENCHMARK(BM_StructuralVerdict);

BENCHMARK_MAIN();
