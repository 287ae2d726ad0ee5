#include <benchmark/benchmark.h>

#include "arfinsler/ar.hpp"
#include "arfinsler/oracle.hpp"

using namespace arf;

namespace {

RatFn c(int n, long a) { return RatFn(n, mpq_class(a)); }

// gcd((p q), (p r)) with p of growing degree in three y variables.
void BM_Gcd(benchmark::State& state) {
  const int n = 3, d = static_cast<int>(state.range(0));
  MPoly p(n, mpq_class(1));
  for (int i = 1; i <= n; ++i) p += MPoly::y(n, i).pow(d) + MPoly::x(n, i) * MPoly::y(n, i);
  const MPoly q = MPoly::y(n, 1) * MPoly::y(n, 2) + MPoly::x(n, 3);
  const MPoly r = MPoly::y(n, 3).pow(2) - MPoly::y(n, 1);
  const MPoly a = p * q, b = p * r;
  for (auto _ : state) benchmark::DoNotOptimize(gcd(a, b));
}
BENCHMARK(BM_Gcd)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

MetricInstance cubic() {
  RootData r;
  r.m = 3;
  r.A = RatFn::y(3, 1) * RatFn::y(3, 2) * RatFn::y(3, 3);
  return make_mth_root(r, 3);
}

MetricInstance kropina_x() {
  RiemannData a;
  a.alpha = {{c(2, 1), c(2, 0)}, {c(2, 0), c(2, 1) + RatFn::x(2, 1) * RatFn::x(2, 1)}};
  OneFormData b;
  b.b = {c(2, 1), RatFn::x(2, 1)};
  return make_gen_kropina(a, b, 1);
}

// Every object of the session, from g to E.
void BM_Pipeline(benchmark::State& state, MetricInstance (*make)()) {
  const MetricInstance inst = make();
  for (auto _ : state) {
    FinslerSession s(inst.F2);
    for (const auto& name : FinslerSession::object_names()) benchmark::DoNotOptimize(s.object(name));
  }
}
BENCHMARK_CAPTURE(BM_Pipeline, cubic, cubic)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Pipeline, kropina_x, kropina_x)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  const MetricInstance inst = kropina_x();
  for (auto _ : state) {
    FinslerSession s(inst.F2);
    benchmark::DoNotOptimize(verify_instance(inst, s, true));
  }
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const MetricInstance inst = kropina_x();
  FinslerSession s(inst.F2);
  for (const auto& name : FinslerSession::object_names()) s.object(name);
  OracleOptions opt;
  opt.points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_oracle(inst, s, opt));
}
BENCHMARK(BM_Oracle)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
