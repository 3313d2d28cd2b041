#include <benchmark/benchmark.h>

#include <random>

#include "sublin/approx_bias.hpp"
#include "sublin/approx_ls.hpp"
#include "sublin/generators.hpp"
#include "sublin/hash_family.hpp"
#include "sublin/oracle.hpp"
#include "sublin/planar.hpp"
#include "sublin/space.hpp"
#include "sublin/tree_dp.hpp"

namespace {

using namespace sublin;

Formula chain(std::uint32_t n) {
  PlanarOptions o;
  o.kind = PlanarKind::chain;
  o.width = n;
  o.seed = n;
  return gen_planar_instance(o).formula;
}

Formula grid(std::uint32_t side) {
  PlanarOptions o;
  o.kind = PlanarKind::grid;
  o.width = side;
  o.height = side;
  o.seed = side;
  return gen_planar_instance(o).formula;
}

Formula random3(std::uint32_t n) {
  std::mt19937_64 rng(n);
  return random_cnf(n, 4 * n, 3, rng);
}

template <class Body>
void report_peak(benchmark::State& state, Body&& body) {
  std::uint64_t peak = 0;
  for (auto _ : state) {
    const SpaceReport r = meter_scope("bench", [&] { benchmark::DoNotOptimize(body()); });
    peak = r.peak_aux_cells;
  }
  state.counters["peak_cells"] = static_cast<double>(peak);
}

void BM_Half(benchmark::State& state) {
  const Formula f = random3(static_cast<std::uint32_t>(state.range(0)));
  report_peak(state, [&] { return half_approx(f).satisfied; });
}
BENCHMARK(BM_Half)->RangeMultiplier(4)->Range(64, 4096);

void BM_Ls(benchmark::State& state) {
  const Formula f = chain(static_cast<std::uint32_t>(state.range(0)));
  report_peak(state, [&] { return ls_solve(f).satisfied; });
}
BENCHMARK(BM_Ls)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_Chou(benchmark::State& state) {
  const Formula f = chain(static_cast<std::uint32_t>(state.range(0)));
  report_peak(state, [&] { return chou_solve(f).satisfied; });
}
BENCHMARK(BM_Chou)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_PartitionScan(benchmark::State& state) {
  const Formula f = chain(static_cast<std::uint32_t>(state.range(0)));
  report_peak(state, [&] {
    std::uint64_t parts = 0;
    const PartitionStream s = partition(f, 3);
    s.scan([&](const PartView&) { ++parts; });
    return parts;
  });
}
BENCHMARK(BM_PartitionScan)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

void BM_PtasGrid(benchmark::State& state) {
  const Formula f = grid(static_cast<std::uint32_t>(state.range(0)));
  report_peak(state, [&] { return planar_ptas(f, 1, 2).satisfied; });
}
BENCHMARK(BM_PtasGrid)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const Formula f = random3(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_maxsat(f).opt);
}
BENCHMARK(BM_Oracle)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

void BM_HashEnumeration(benchmark::State& state) {
  const HashFamilySpec spec = make_hash_spec(64, static_cast<std::uint32_t>(state.range(0)), 1, 2);
  for (auto _ : state) {
    std::uint64_t ones = 0;
    enum_family(spec).scan([&](const HashFunction& h) { ones += h.bit(1) ? 1 : 0; });
    benchmark::DoNotOptimize(ones);
  }
  state.counters["members"] = static_cast<double>(spec.family_size());
}
BENCHMARK(BM_HashEnumeration)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
