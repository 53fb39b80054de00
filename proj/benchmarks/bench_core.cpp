#include <benchmark/benchmark.h>

#include <random>

#include "sphere_hofa/counting.hpp"
#include "sphere_hofa/division.hpp"
#include "sphere_hofa/equidist.hpp"
#include "sphere_hofa/msets.hpp"

namespace {

using namespace shofa;

// Single-threaded throughout so numbers compare across machines.
const EnumOptions kSerial{1, kDefaultBudget};

void BM_sphere_count(benchmark::State& state) {
  const i64 p = state.range(0);
  const int d = int(state.range(1));
  QuadForm M = QuadForm::sphere(p, d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_zeros(M, nullptr, kSerial).size());
  state.counters["points"] = benchmark::Counter(ipow(double(p), d), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_sphere_count)->Args({5, 4})->Args({11, 4})->Args({13, 5})->Unit(benchmark::kMillisecond);

void BM_exp_sum(benchmark::State& state) {
  const i64 p = state.range(0);
  QuadForm M = QuadForm::sphere(p, 4, 1);
  PointSet V = enumerate_zeros(M, nullptr, kSerial);
  Vec xi{1, 2, 3, 4};
  for (auto _ : state) benchmark::DoNotOptimize(exp_sum_on(V, xi));
}
BENCHMARK(BM_exp_sum)->Arg(7)->Arg(13)->Unit(benchmark::kMicrosecond);

void BM_gowers_box1(benchmark::State& state) {
  QuadForm M = QuadForm::sphere(5, int(state.range(0)), 1);
  PointSet V = enumerate_zeros(M, nullptr, kSerial);
  for (auto _ : state) benchmark::DoNotOptimize(count_gowers(V, 1, kSerial));
}
BENCHMARK(BM_gowers_box1)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_division(benchmark::State& state) {
  const i64 p = 7;
  const int d = 4;
  std::mt19937_64 rng(7);
  QuadForm M = QuadForm::sphere(p, d, 1);
  FpMultiPoly R = random_poly(p, d, int(state.range(0)), rng);
  FpMultiPoly P = M.to_poly() * R;
  for (auto _ : state) benchmark::DoNotOptimize(divide(P, M).exact());
}
BENCHMARK(BM_division)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_nullstellensatz_witness(benchmark::State& state) {
  const i64 p = 7;
  std::mt19937_64 rng(11);
  QuadForm M = QuadForm::sphere(p, 4, 1);
  FpMultiPoly P = random_poly(p, 4, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(nullstellensatz(P, M, kSerial).status);
}
BENCHMARK(BM_nullstellensatz_witness)->Unit(benchmark::kMillisecond);

void BM_mset_enumeration(benchmark::State& state) {
  QuadForm M = QuadForm::sphere(5, int(state.range(0)), 1);
  MFamily box = gowers_family(M, 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_mset(box, kSerial).size());
}
BENCHMARK(BM_mset_enumeration)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_equidist_scan(benchmark::State& state) {
  const i64 p = 11;
  QuadForm M = QuadForm::sphere(p, 4, 1);
  PointSet V = enumerate_zeros(M, nullptr, kSerial);
  std::mt19937_64 rng(3);
  TorusPolySeq g = random_periodic_seq(V, 1, 2, rng);
  const int K = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(equidist_test(g, V, 0.01, K, kSerial).max_fourier);
}
BENCHMARK(BM_equidist_scan)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
