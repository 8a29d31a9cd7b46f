#include <benchmark/benchmark.h>

#include <random>

#include "ktbrst/models.hpp"
#include "ktbrst/runner.hpp"

using namespace ktbrst;

namespace {

FieldSpacePtr bench_space() {
  FieldDecl y = FieldDecl::field("y", Parity::Even);
  FieldDecl w = FieldDecl::field("w", Parity::Odd);
  FieldDecl c = FieldDecl::ghost("c", Parity::Odd, 1);
  return FieldSpace::make({"x0", "x1"},
                          {y, w, c, FieldDecl::antifield_for(y, "ybar"),
                           FieldDecl::antifield_for(w, "wbar"), FieldDecl::antifield_for(c, "cbar")});
}

GradedPoly random_poly(const FieldSpacePtr& s, std::mt19937_64& rng, int terms) {
  std::vector<RawTerm> raw;
  auto pick = [&](long lo, long hi) { return lo + static_cast<long>(rng() % (hi - lo + 1)); };
  for (int t = 0; t < terms; ++t) {
    RawTerm term{rat(pick(-4, 4) * 2 + 1, pick(1, 3)), {}};
    int nf = static_cast<int>(pick(1, 4));
    for (int f = 0; f < nf; ++f) {
      int field = static_cast<int>(pick(0, s->size() - 1));
      MultiIndex idx(s->dim());
      int order = static_cast<int>(pick(0, 2));
      for (int k = 0; k < order; ++k) idx = idx.plus(static_cast<int>(pick(0, s->dim() - 1)));
      term.factors.push_back(Factor{JetVar{field, idx}, s->is_odd(field) ? 1 : static_cast<int>(pick(1, 2))});
    }
    raw.push_back(std::move(term));
  }
  return normalize(s, raw);
}

void BM_normalize(benchmark::State& state) {
  auto s = bench_space();
  std::mt19937_64 rng(1);
  GradedPoly p = random_poly(s, rng, static_cast<int>(state.range(0)));
  std::vector<RawTerm> raw;
  for (const Monomial& m : p.terms()) raw.push_back(RawTerm{m.coeff, m.factors});
  for (auto _ : state) benchmark::DoNotOptimize(normalize(s, raw));
}
BENCHMARK(BM_normalize)->Arg(16)->Arg(128);

void BM_mul(benchmark::State& state) {
  auto s = bench_space();
  std::mt19937_64 rng(2);
  GradedPoly a = random_poly(s, rng, static_cast<int>(state.range(0)));
  GradedPoly b = random_poly(s, rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
}
BENCHMARK(BM_mul)->Arg(8)->Arg(32);

void BM_total_derivative(benchmark::State& state) {
  auto s = bench_space();
  std::mt19937_64 rng(3);
  GradedPoly p = random_poly(s, rng, 64);
  for (auto _ : state) benchmark::DoNotOptimize(total_derivative(p, 0));
}
BENCHMARK(BM_total_derivative);

void BM_euler_lagrange_yang_mills(benchmark::State& state) {
  Model m = build_builtin("yang-mills:su2:n3");
  for (auto _ : state) benchmark::DoNotOptimize(euler_lagrange(m.lagrangian));
}
BENCHMARK(BM_euler_lagrange_yang_mills);

void BM_kt_nilpotency_yang_mills(benchmark::State& state) {
  Model m = build_builtin("yang-mills:su2:n3");
  for (auto _ : state) {
    Derivation kt = build_kt_operator(m);
    benchmark::DoNotOptimize(is_nilpotent(kt));
  }
}
BENCHMARK(BM_kt_nilpotency_yang_mills);

void BM_master_equation_bf(benchmark::State& state) {
  Model m = build_builtin("bf:n4p1q2");
  Density lE = build_proper_solution(m);
  for (auto _ : state) benchmark::DoNotOptimize(check_master_equation(m, lE));
}
BENCHMARK(BM_master_equation_bf);

void BM_full_report_yang_mills(benchmark::State& state) {
  Model m = build_builtin("yang-mills:su2:n3");
  for (auto _ : state) benchmark::DoNotOptimize(run_checks(m));
}
BENCHMARK(BM_full_report_yang_mills);

}  // namespace

BENCHMARK_MAIN();
