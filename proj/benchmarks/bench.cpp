#include <benchmark/benchmark.h>

#include "islab/complexity.hpp"
#include "islab/cybernetic.hpp"
#include "islab/lz78.hpp"
#include "islab/machine.hpp"
#include "islab/player.hpp"

namespace {

using namespace islab;

// A counting loop: set the cell, then flip it in place a while.
// ~ [ . ~ ] with a few extra flips keeps the interpreter busy.
static void BM_MachineRun(benchmark::State& state) {
  BitString program = BitString::parse("010011101010100111");
  for (auto _ : state) {
    auto out = run(program, {}, 10000);
    benchmark::DoNotOptimize(out.steps);
  }
}
BENCHMARK(BM_MachineRun);

static void BM_PlainSearch(benchmark::State& state) {
  BitString target = BitString::parse("0");
  Budget budget{static_cast<std::uint32_t>(state.range(0)), 200};
  ComplexityEngine engine(nullptr, 1);
  for (auto _ : state) {
    auto result = engine.plain(target, {}, budget);
    benchmark::DoNotOptimize(result.exact);
  }
}
BENCHMARK(BM_PlainSearch)->Arg(8)->Arg(10)->Arg(12);

static void BM_PlainSearchParallel(benchmark::State& state) {
  BitString target = BitString::parse("11");
  Budget budget{14, 500};
  ComplexityEngine engine(nullptr, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    auto result = engine.plain(target, {}, budget);
    benchmark::DoNotOptimize(result.exact);
  }
}
BENCHMARK(BM_PlainSearchParallel)->Arg(1)->Arg(2)->Arg(4);

static void BM_Lz78(benchmark::State& state) {
  BitString x;
  for (int i = 0; i < state.range(0); ++i) x.push_back((i * 7 >> 2) & 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lz78_estimate(x));
  }
}
BENCHMARK(BM_Lz78)->Arg(64)->Arg(1024)->Arg(16384);

static void BM_Intersect(benchmark::State& state) {
  const std::uint32_t n = 16;
  Player a(n), b(n);
  for (std::uint64_t v = 0; v < (1u << n); v += 3) a.insert(BitString::from_uint(v, n));
  for (std::uint64_t v = 0; v < (1u << n); v += 5) b.insert(BitString::from_uint(v, n));
  for (auto _ : state) {
    Player shared = intersect(a, b);
    benchmark::DoNotOptimize(shared.size());
  }
}
BENCHMARK(BM_Intersect);

static void BM_Expectimax(benchmark::State& state) {
  auto env = echo_environment();
  const std::uint32_t m = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    Rat v = optimal_value(*env, m);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Expectimax)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
