#include <benchmark/benchmark.h>

#include "pcim/atoms.hpp"
#include "pcim/map_io.hpp"

using namespace pcim;

static void BM_ExpandAtoms(benchmark::State& state) {
  MapSpec spec = MapSpec::validate(gallery()[3].second);  // six pieces
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    AtomTree tree = expand_atoms(spec, depth);
    benchmark::DoNotOptimize(tree.depth());
  }
}
BENCHMARK(BM_ExpandAtoms)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_EnclosureAtDepth(benchmark::State& state) {
  MapSpec spec = MapSpec::validate(gallery()[1].second);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto cover = enclosure_at_depth(spec, depth);
    benchmark::DoNotOptimize(cover.size());
  }
}
BENCHMARK(BM_EnclosureAtDepth)->Arg(12)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);
