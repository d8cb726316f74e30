#include <benchmark/benchmark.h>

#include "mpass/clarke.hpp"
#include "mpass/corpus.hpp"
#include "mpass/deformation.hpp"
#include "mpass/min_norm.hpp"
#include "mpass/oracle.hpp"
#include "mpass/path.hpp"
#include "mpass/problem.hpp"
#include "mpass/tangency_sweep.hpp"

namespace {

using namespace mpass;

void BM_MinNormPoint(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int count = static_cast<int>(state.range(1));
  Rng rng(1);
  std::vector<Vec> gens;
  for (int k = 0; k < count; ++k) gens.push_back(sample_ball(rng, Vec::Constant(dim, 0.3), 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(min_norm_point(gens));
}
BENCHMARK(BM_MinNormPoint)->Args({2, 16})->Args({6, 16})->Args({6, 64})->Args({20, 64});

void BM_SampleHull(benchmark::State& state) {
  const ScalarField f = corpus_field("nonsmooth_well");
  const Vec x = make_vec({1.0, 0.1});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_hull(f, x, 1e-3, 0, ++seed).min_norm_point());
}
BENCHMARK(BM_SampleHull);

void BM_FlowStep(benchmark::State& state) {
  const ScalarField f = corpus_field("double_well");
  DescentParams p;
  p.hull = HullParams{1e-3, 0, 1};
  p.cutoff_inner = 0.1;
  p.cutoff_outer = 0.3;
  const DescentField df = DescentField::build(f, {make_vec({0.0, 0.3})}, 0.05, make_vec({-1.0, 0.0}),
                                              make_vec({1.0, 0.0}), p);
  for (auto _ : state) benchmark::DoNotOptimize(df.flow(make_vec({0.02, 0.31}), df.h_max(), 7));
}
BENCHMARK(BM_FlowStep);

void BM_PathValue(benchmark::State& state) {
  const ScalarField f = corpus_field("double_well");
  const PLPath p = PLPath::straight(f, make_vec({-1.0, 0.0}), make_vec({1.0, 0.0}), 65);
  for (auto _ : state) benchmark::DoNotOptimize(path_value(p, f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PathValue)->Arg(8)->Arg(32);

void BM_GridOracle(benchmark::State& state) {
  const MountainPassProblem problem = default_problem("double_well");
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_bottleneck_oracle(problem, Box::cube(2, 2.0), static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_GridOracle)->Arg(51)->Arg(101)->Arg(201);

void BM_SweepCircle(benchmark::State& state) {
  const ScalarField f = corpus_field("broughton");
  for (auto _ : state) benchmark::DoNotOptimize(sweep_circle(f, 40.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SweepCircle)->Arg(720)->Arg(2880);

}  // namespace

BENCHMARK_MAIN();
