#include <benchmark/benchmark.h>

#include "frflow/transform.h"

namespace {

frflow::ScalarField test_field(int n) {
  auto grid = frflow::make_grid(n, 64.0);
  auto f = frflow::make_scalar_field(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = grid.coord(i), y = grid.coord(j);
      f.at(i, j) = std::exp(-(x * x + y * y) / 8.0);
    }
  return f;
}

void BM_forward_transform(benchmark::State& state) {
  auto f = test_field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(frflow::forward_transform(f));
}
BENCHMARK(BM_forward_transform)->Arg(256)->Arg(512);

void BM_roundtrip(benchmark::State& state) {
  auto f = test_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto c = frflow::forward_transform(f);
    benchmark::DoNotOptimize(frflow::inverse_transform(c));
  }
}
BENCHMARK(BM_roundtrip)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
