#include <benchmark/benchmark.h>

#include "recon/bounds.hpp"
#include "recon/coverage.hpp"
#include "recon/harness.hpp"

using namespace recon;

namespace {

Instance make_instance(int d, int n, std::uint64_t seed) {
  RngStream stream(seed);
  std::vector<double> signal(static_cast<std::size_t>(d), 0.0);
  signal[0] = 1.0;
  return draw_instance(signal, n, 1.0, DirectionLaw::uniform_sphere(), stream);
}

void BM_VertexEnumeration(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const Instance inst = make_instance(d, n, 1);
  const SlabSystem slabs = error_polytope(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_error_exact(slabs).value);
  }
}
BENCHMARK(BM_VertexEnumeration)->Args({2, 16})->Args({3, 32})->Args({3, 64})->Args({4, 32});

void BM_RadialExtent(benchmark::State& state) {
  const Instance inst = make_instance(3, static_cast<int>(state.range(0)), 2);
  const SlabSystem slabs = error_polytope(inst);
  const UnitVector probe = UnitVector::basis(3, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial_extent(slabs, probe));
  }
}
BENCHMARK(BM_RadialExtent)->Arg(16)->Arg(256);

void BM_ConsistentEstimate(benchmark::State& state) {
  const Instance inst = make_instance(3, static_cast<int>(state.range(0)), 3);
  std::vector<UnitVector> dirs;
  for (const Measurement& m : inst.measurements) dirs.push_back(m.direction);
  const std::vector<double> warm = linear_estimate(inst, canonical_dual(dirs));
  for (auto _ : state) {
    benchmark::DoNotOptimize(consistent_estimate(inst, warm, 1e-9, 4000).passes_used);
  }
}
BENCHMARK(BM_ConsistentEstimate)->Arg(16)->Arg(64);

void BM_GeodesicNet(benchmark::State& state) {
  for (auto _ : state) {
    RngStream stream(4);
    benchmark::DoNotOptimize(build_geodesic_net(3, 0.3, stream).points.size());
  }
}
BENCHMARK(BM_GeodesicNet);

void BM_CapMeasure(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cap_relative_measure(d, 0.9));
  }
}
BENCHMARK(BM_CapMeasure)->Arg(3)->Arg(16);

void BM_BclBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcl_noncoverage_bound(n, 3, 1.1));
  }
}
BENCHMARK(BM_BclBound)->Arg(20)->Arg(100);

void BM_ArcOracle(benchmark::State& state) {
  RngStream stream(5);
  std::vector<ArcSpec> arcs(static_cast<std::size_t>(state.range(0)));
  for (ArcSpec& a : arcs) {
    a.center = stream.uniform(0.0, 6.28);
    a.half_width = stream.uniform(0.2, 1.4);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(arc_noncoverage_exact_d2(arcs));
  }
}
BENCHMARK(BM_ArcOracle)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
