// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "substatic/catalogue.hpp"
#include "substatic/kernels.hpp"

namespace {

struct Inputs {
  substatic::WarpedProductModel model = substatic::builtin_model("SCHW3").model;
  std::vector<double> theta, u, du, d2u, weights;

  explicit Inputs(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const double th = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      theta.push_back(th);
      u.push_back(2.0 + 0.1 * std::cos(th));
      du.push_back(-0.1 * std::sin(th));
      d2u.push_back(-0.1 * std::cos(th));
      weights.push_back(std::numbers::pi / static_cast<double>(count));
    }
  }
};

void BM_EvaluateSerial(benchmark::State& state) {
  const Inputs in(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(substatic::kernels::evaluate_serial(in.model, in.theta, in.u, in.du, in.d2u));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const Inputs in(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        substatic::kernels::evaluate_parallel(in.model, in.theta, in.u, in.du, in.d2u));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IntegrateSerial(benchmark::State& state) {
  const Inputs in(static_cast<std::size_t>(state.range(0)));
  const auto pts = substatic::kernels::evaluate_serial(in.model, in.theta, in.u, in.du, in.d2u);
  const substatic::kernels::PointIntegrand g = [](const substatic::SurfacePoint& p) {
    return p.f / p.mean_curvature;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(substatic::kernels::integrate_serial(pts, in.weights, g));
  }
}

void BM_IntegrateParallel(benchmark::State& state) {
  const Inputs in(static_cast<std::size_t>(state.range(0)));
  const auto pts = substatic::kernels::evaluate_serial(in.model, in.theta, in.u, in.du, in.d2u);
  const substatic::kernels::PointIntegrand g = [](const substatic::SurfacePoint& p) {
    return p.f / p.mean_curvature;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(substatic::kernels::integrate_parallel(pts, in.weights, g));
  }
}

void BM_VelocitySerial(benchmark::State& state) {
  const Inputs in(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(in.u.size());
  for (auto _ : state) {
    substatic::kernels::flow_velocity_serial(in.model, in.u, in.du, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_VelocityParallel(benchmark::State& state) {
  const Inputs in(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(in.u.size());
  for (auto _ : state) {
    substatic::kernels::flow_velocity_parallel(in.model, in.u, in.du, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Range(128, 1 << 16);
BENCHMARK(BM_EvaluateParallel)->Range(128, 1 << 16);
BENCHMARK(BM_IntegrateSerial)->Range(128, 1 << 16);
BENCHMARK(BM_IntegrateParallel)->Range(128, 1 << 16);
BENCHMARK(BM_VelocitySerial)->Range(128, 1 << 16);
BENCHMARK(BM_VelocityParallel)->Range(128, 1 << 16);

BENCHMARK_MAIN();
