#include <benchmark/benchmark.h>

#include "stm/adams.hpp"
#include "stm/heller.hpp"

using namespace stm;

namespace {

RModule block(Ring r, int a) { return module_from_partition(r, {a}); }

void BM_StableHom(benchmark::State& state) {
  Ring r(3, static_cast<int>(state.range(0)));
  RModule A = module_from_partition(r, {1, 2, r.m - 1});
  RModule B = module_from_partition(r, {2, r.m - 1, r.m - 2});
  for (auto _ : state) benchmark::DoNotOptimize(StableHomSpace(A, B).dim());
}
BENCHMARK(BM_StableHom)->DenseRange(3, 6);

void BM_ConeTriangle(benchmark::State& state) {
  Ring r(2, static_cast<int>(state.range(0)));
  StableMap f(mu(block(r, 1), block(r, 2), 1));
  for (auto _ : state) benchmark::DoNotOptimize(cone_triangle(f).Z().dim());
}
BENCHMARK(BM_ConeTriangle)->DenseRange(3, 6);

void BM_Bracket3(benchmark::State& state) {
  Ring r(3, 3);
  RModule k = block(r, 1), M = block(r, 2);
  StableMap q(mu(M, k, 0)), i(mu(k, M, 1));
  const auto defn = static_cast<BracketDefn>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bracket3(q, i, q, defn).size());
}
BENCHMARK(BM_Bracket3)->Arg(0)->Arg(1)->Arg(2);

void BM_FourFoldBracket(benchmark::State& state) {
  Ring r(3, 4);
  RModule k = block(r, 1), N = block(r, 3);
  std::vector<StableMap> maps{StableMap(mu(N, k, 0)), StableMap(mu(k, N, 2)), StableMap(mu(N, k, 0)),
                              StableMap(mu(k, N, 2))};
  for (auto _ : state) benchmark::DoNotOptimize(higher_bracket(maps).size());
}
BENCHMARK(BM_FourFoldBracket);

void BM_AdamsResolution(benchmark::State& state) {
  Ring r(2, 4);
  ProjectiveClass cls = ghost_class(block(r, 1));
  for (auto _ : state) benchmark::DoNotOptimize(adams_resolution(block(r, 2), cls, static_cast<int>(state.range(0))).length());
}
BENCHMARK(BM_AdamsResolution)->Arg(2)->Arg(6);

void BM_DrForms(benchmark::State& state) {
  Ring r(2, 4);
  RModule M = block(r, 2);
  AdamsSS ss(adams_resolution(M, ghost_class(block(r, 1)), 6), M);
  const RModule P = ss.resolution().P[0];
  StableMap kappa(map_from_blocks(P, M, {{{0, 1}, {0}}}));
  for (auto _ : state) benchmark::DoNotOptimize(dr_bracket_forms(ss, kappa, 0, 0, 2).all_equal());
}
BENCHMARK(BM_DrForms);

void BM_HellerCheck(benchmark::State& state) {
  Ring r(3, static_cast<int>(state.range(0)));
  Triangle t = cone_triangle(StableMap(mu(block(r, 2), block(r, 1), 0)));
  for (auto _ : state) benchmark::DoNotOptimize(heller_check(t).distinguished());
}
BENCHMARK(BM_HellerCheck)->DenseRange(3, 5);

}  // namespace

BENCHMARK_MAIN();
