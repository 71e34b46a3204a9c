#include <benchmark/benchmark.h>

#include "lapinv/invariants.hpp"
#include "lapinv/opalg.hpp"
#include "lapinv/parser.hpp"
#include "lapinv/verify.hpp"

using namespace lapinv;

namespace {

ClassSpec single(MultiIndex v) { return ClassSpec(v.dim(), {{v, JetExpr(1)}}); }

ClassSpec order5() {
  return ClassSpec(3, {{{2, 2, 1}, param("p", 3)}, {{1, 3, 1}, param("q", 3)}, {{1, 1, 3}, JetExpr(1)}});
}

std::vector<TemplateStage> xyz_templates() {
  const std::string prod = "(D[1,0,0] + p)*(D[0,1,0] + q)*(D[0,0,1] + r)";
  std::vector<MultiIndex> second{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  std::vector<MultiIndex> first = second;
  first.insert(first.end(), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  return {{prod, {}, second, false},
          {prod + " + (D[1,0,0] + s)*(D[0,1,0] + q) + (D[0,1,0] + t)*(D[0,0,1] + r)"
                  " + (D[0,0,1] + u)*(D[1,0,0] + p)",
           {}, first, false}};
}

void BM_gauge(benchmark::State &state) {
  int k = static_cast<int>(state.range(0));
  DiffOperator L = single({k, 2}).generic_operator();
  for (auto _ : state)
    benchmark::DoNotOptimize(gauge(L));
}
BENCHMARK(BM_gauge)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_op_mul(benchmark::State &state) {
  int k = static_cast<int>(state.range(0));
  DiffOperator A = expand_template(parse_template("(D[1,0] + p)^" + std::to_string(k), 2));
  DiffOperator B = expand_template(parse_template("(D[0,1] + q)^" + std::to_string(k), 2));
  for (auto _ : state)
    benchmark::DoNotOptimize(A * B);
}
BENCHMARK(BM_op_mul)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_complete_set_xxy(benchmark::State &state) {
  ClassSpec s = single({2, 1});
  for (auto _ : state)
    benchmark::DoNotOptimize(complete_set(s));
}
BENCHMARK(BM_complete_set_xxy)->Unit(benchmark::kMillisecond);

void BM_complete_set_xyz(benchmark::State &state) {
  ClassSpec s = single({1, 1, 1});
  auto t = xyz_templates();
  for (auto _ : state)
    benchmark::DoNotOptimize(complete_set(s, t));
}
BENCHMARK(BM_complete_set_xyz)->Unit(benchmark::kMillisecond);

void BM_complete_set_order5(benchmark::State &state) {
  ClassSpec s = order5();
  for (auto _ : state)
    benchmark::DoNotOptimize(complete_set(s));
}
BENCHMARK(BM_complete_set_order5)->Unit(benchmark::kMillisecond);

void BM_is_invariant_bottom(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  InvariantRecord r = recursive_hyperbolic_bottom(n);
  DeltaContext ctx(single(MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 1))));
  for (auto _ : state)
    benchmark::DoNotOptimize(is_invariant(r.expression, ctx));
}
BENCHMARK(BM_is_invariant_bottom)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
