#include <benchmark/benchmark.h>

#include <random>

#include "peristab/experiments.hpp"

using namespace peristab;

namespace {

struct Case {
  Model model;
  std::vector<Vec3> x;
};

Case make_case(int dim, int span, int N) {
  MaterialSpec mat;
  mat.m = 0.5;
  mat.law = dim == 1 ? LawKind::Hookean1D : LawKind::IsotropicLinear;
  mat.lambda = 1.0;
  mat.mu = 1.0;
  const double s = span;
  NodeSet ns = build_grid(dim, {s, dim > 1 ? s : 0.0, dim > 2 ? s : 0.0}, 1.0);
  Case c{make_model(std::move(ns), InfluenceSpec::step(N), mat), {}};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  c.x = c.model.nodes.X;
  for (auto& p : c.x)
    for (int k = 0; k < dim; ++k) p[k] *= 1.0 + u(rng);
  return c;
}

void run(benchmark::State& state, Exec exec) {
  const int dim = static_cast<int>(state.range(0));
  const int span = static_cast<int>(state.range(1));
  const Case c = make_case(dim, span, 3);
  std::vector<Vec3> f;
  for (auto _ : state) {
    internal_force(c.model, c.x, f, exec);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.model.families.bonds().size()));
  state.counters["nodes"] = static_cast<double>(c.model.size());
}

void BM_ForceSerial(benchmark::State& state) { run(state, Exec::Serial); }
void BM_ForceParallel(benchmark::State& state) { run(state, Exec::Parallel); }

}  // namespace

BENCHMARK(BM_ForceSerial)->Args({1, 4000})->Args({2, 60})->Args({3, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForceParallel)->Args({1, 4000})->Args({2, 60})->Args({3, 16})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
