#include <benchmark/benchmark.h>

#include "clocklam/discrimination.hpp"
#include "clocklam/fpc.hpp"
#include "clocklam/rational.hpp"

using namespace clocklam;

static void BM_HeadReduction(benchmark::State& state) {
  TermPtr t = Term::app(apply_n(make_y1(), make_delta(),
                                static_cast<std::uint32_t>(state.range(0))),
                        Term::free_var("x"));
  for (auto _ : state) {
    auto out = reduce_to_hnf(t);
    benchmark::DoNotOptimize(out.term);
  }
}
BENCHMARK(BM_HeadReduction)->Arg(2)->Arg(8)->Arg(32);

static void BM_ClockedBt(benchmark::State& state) {
  TermPtr t = Term::app(make_y0(), Term::free_var("f"));
  TreeConfig cfg{static_cast<std::uint32_t>(state.range(0)), 10000,
                 ClockMode::Count};
  for (auto _ : state) {
    auto tree = clocked_bt(t, cfg);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BM_ClockedBt)->Arg(8)->Arg(16);

static void BM_RationalExpand(benchmark::State& state) {
  TermPtr t = Term::app(vector_fpc({2, 3}), Term::free_var("x"));
  auto reduct = find_simple_reduct(t);
  for (auto _ : state) {
    auto rt = rational_expand(reduct->term, {256, 20000, ClockMode::Atomic});
    benchmark::DoNotOptimize(rt);
  }
}
BENCHMARK(BM_RationalExpand);

static void BM_Discriminate(benchmark::State& state) {
  TermPtr a = bohm_fpc(2);
  TermPtr b = scott_fpc(2);
  for (auto _ : state) {
    auto v = discriminate(a, b);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Discriminate);

static void BM_ConvertibleSearch(benchmark::State& state) {
  TermPtr a = make_y1();
  TermPtr b = scott_fpc(1);
  for (auto _ : state) {
    auto out = convertible_bounded(a, b, {4000, 2000});
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ConvertibleSearch);

BENCHMARK_MAIN();
