#include <benchmark/benchmark.h>

#include "pcim/decomposition.hpp"
#include "pcim/map_io.hpp"

using namespace pcim;

static void BM_DecomposeGallery(benchmark::State& state) {
  auto maps = gallery();
  MapSpec spec = MapSpec::validate(maps[static_cast<std::size_t>(state.range(0))].second);
  for (auto _ : state) {
    DecompositionReport report = decompose(spec, Budget{.horizon = 5000});
    benchmark::DoNotOptimize(report.n_periodic);
  }
}
BENCHMARK(BM_DecomposeGallery)->Arg(0)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
