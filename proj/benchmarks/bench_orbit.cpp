#include <benchmark/benchmark.h>

#include "pcim/map_io.hpp"
#include "pcim/orbit.hpp"

using namespace pcim;

static MapSpec wrap_spec() { return MapSpec::validate(gallery()[1].second); }

static void BM_IterateWrap(benchmark::State& state) {
  MapSpec spec = wrap_spec();
  const long steps = state.range(0);
  Rational start(2, 5);
  for (auto _ : state) {
    long symbols = 0;
    detail::stream_orbit(spec, start, steps, [&](long, const Rational&, int piece) {
      symbols += piece;
      return true;
    });
    benchmark::DoNotOptimize(symbols);
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_IterateWrap)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_DetectPeriodicity(benchmark::State& state) {
  MapSpec spec = wrap_spec();
  Rational start(2, 5);
  for (auto _ : state) {
    auto cert = detect_eventual_periodicity_ex(spec, start, state.range(0));
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_DetectPeriodicity)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_WordFixedPoint(benchmark::State& state) {
  MapSpec spec = wrap_spec();
  ItineraryWord word;
  for (long k = 0; k < state.range(0); ++k) word.symbols.push_back(k % 3 == 2 ? 2 : 1);
  for (auto _ : state) {
    auto cert = word_fixed_point(spec, word);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_WordFixedPoint)->Arg(32)->Arg(256)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
