#include <benchmark/benchmark.h>

#include "goi/algebra.hpp"
#include "goi/expr.hpp"
#include "goi/lawcheck.hpp"

using namespace goi;

namespace {

void BM_PrefixApply(benchmark::State& state) {
  auto t = compose(tau_star(), compose(sigma_star(), tau_star()));
  std::uint64_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.apply(Nat(n++ & 0xffff)));
  }
}
BENCHMARK(BM_PrefixApply);

void BM_SymbolicCompose(benchmark::State& state) {
  auto t = tau_star();
  auto s = sigma_star();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose(star(t, identity()), compose(t, star(identity(), s))));
  }
}
BENCHMARK(BM_SymbolicCompose);

void BM_BangApply(benchmark::State& state) {
  auto f = lawcheck::random_finite(1, 16, 64);
  auto b = bang(f);
  std::uint64_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.apply(Nat(n++ & 0xfff)));
  }
}
BENCHMARK(BM_BangApply);

void BM_PsiInverse(benchmark::State& state) {
  Nat n = pow2(static_cast<std::size_t>(state.range(0))) - 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi_inv(n));
  }
}
BENCHMARK(BM_PsiInverse)->Arg(16)->Arg(256)->Arg(4096);

void BM_ExecEval(benchmark::State& state) {
  auto succ = expr::builtin("succ");
  for (auto _ : state) {
    benchmark::DoNotOptimize(exec_eval(succ, Nat(12345), 10));
  }
}
BENCHMARK(BM_ExecEval);

void BM_Parse(benchmark::State& state) {
  const std::string text = "sigma2 . !(p * q~) . sigma2 + ?{0->3, 1->5} & r(4) . ex(tau^3)";
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::parse(text));
  }
}
BENCHMARK(BM_Parse);

void BM_FixedPointLaw(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(lawcheck::run_law("fixed-point", 1024, 10, 0));
  }
}
BENCHMARK(BM_FixedPointLaw)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
