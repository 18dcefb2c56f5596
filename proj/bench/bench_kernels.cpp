// Parallel kernels against their serial references. Run with
// OMP_NUM_THREADS=N to vary the worker count.

#include <benchmark/benchmark.h>

#include "finorb/orbits.hpp"
#include "finorb/reference.hpp"
#include "finorb/subgroups.hpp"

using namespace finorb;

namespace {

Homomorphism heis(long k) {
  return heisenberg_standard(Presentation::free(2), TargetGroup::heisenberg_mod(k));
}

void BM_EnumParallel(benchmark::State& st) {
  const auto t = TargetGroup::symmetric(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_homs(Presentation::free(2), t));
}
void BM_EnumSerial(benchmark::State& st) {
  const auto t = TargetGroup::symmetric(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::enumerate_homs(Presentation::free(2), t));
}
BENCHMARK(BM_EnumParallel)->Arg(3)->Arg(4);
BENCHMARK(BM_EnumSerial)->Arg(3)->Arg(4);

void BM_OrbitParallel(benchmark::State& st) {
  const auto rho = heis(st.range(0));
  const auto cat = nielsen_generators(2);
  for (auto _ : st) benchmark::DoNotOptimize(orbit(rho, cat, kDefaultOrbitCap));
}
void BM_OrbitSerial(benchmark::State& st) {
  const auto rho = heis(st.range(0));
  const auto cat = nielsen_generators(2);
  for (auto _ : st) benchmark::DoNotOptimize(reference::orbit(rho, cat, kDefaultOrbitCap));
}
BENCHMARK(BM_OrbitParallel)->Arg(3)->Arg(5)->Arg(7);
BENCHMARK(BM_OrbitSerial)->Arg(3)->Arg(5)->Arg(7);

void BM_ClosureParallel(benchmark::State& st) {
  const auto rho = heis(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(closure(std::span<const Element>(rho.images()), rho.target(), 1u << 20));
}
void BM_ClosureSerial(benchmark::State& st) {
  const auto rho = heis(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(
        reference::closure(std::span<const Element>(rho.images()), rho.target(), 1u << 20));
}
BENCHMARK(BM_ClosureParallel)->Arg(5)->Arg(11);
BENCHMARK(BM_ClosureSerial)->Arg(5)->Arg(11);

void BM_QActionParallel(benchmark::State& st) {
  const auto p = Presentation::free(2);
  const FiniteQuotient q = FiniteQuotient::parse(p, "sym:4:[[1,0,2,3],[1,2,3,0]]");
  for (auto _ : st) benchmark::DoNotOptimize(subgroup_homology(q));
}
void BM_QActionSerial(benchmark::State& st) {
  const auto p = Presentation::free(2);
  const FiniteQuotient q = FiniteQuotient::parse(p, "sym:4:[[1,0,2,3],[1,2,3,0]]");
  const SubgroupHomology h = subgroup_homology(q);
  for (auto _ : st) benchmark::DoNotOptimize(reference::q_action(h));
}
BENCHMARK(BM_QActionParallel);
BENCHMARK(BM_QActionSerial);

}  // namespace

BENCHMARK_MAIN();
