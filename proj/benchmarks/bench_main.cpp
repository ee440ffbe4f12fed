#include <benchmark/benchmark.h>

#include "treksem/families.hpp"
#include "treksem/membership.hpp"
#include "treksem/moments.hpp"
#include "treksem/polytope.hpp"
#include "treksem/trekmat.hpp"

using namespace treksem;

static void BM_FullGeneratorSet(benchmark::State& state) {
  DirectedGraph g = star_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(full_generator_set(g));
}
BENCHMARK(BM_FullGeneratorSet)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_StarRank(benchmark::State& state) {
  GeneratorSet gens = full_generator_set(star_graph(4));
  for (auto _ : state) benchmark::DoNotOptimize(degree2_span_rank(gens));
}
BENCHMARK(BM_StarRank)->Unit(benchmark::kMillisecond);

static void BM_ForwardMoments(benchmark::State& state) {
  std::mt19937_64 rng(1);
  DirectedGraph g = random_polytree(static_cast<int>(state.range(0)), rng);
  auto p = sample_params<Rational>(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(forward_moments(g, p));
}
BENCHMARK(BM_ForwardMoments)->Arg(4)->Arg(8)->Arg(12);

static void BM_TrekRule(benchmark::State& state) {
  DirectedGraph g(5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {0, 4}});
  TrekExpansion x(g);
  auto q = params_to_ab(g, sample_params<Rational>(g, 1));
  for (auto _ : state) benchmark::DoNotOptimize(x.evaluate(q));
}
BENCHMARK(BM_TrekRule);

static void BM_Membership(benchmark::State& state) {
  std::mt19937_64 rng(2);
  DirectedGraph g = random_polytree(static_cast<int>(state.range(0)), rng);
  auto m = forward_moments(g, sample_params<Rational>(g, 2));
  for (auto _ : state) benchmark::DoNotOptimize(decide_membership(g, m));
}
BENCHMARK(BM_Membership)->Arg(4)->Arg(8);

static void BM_MembershipFloat(benchmark::State& state) {
  std::mt19937_64 rng(2);
  DirectedGraph g = random_polytree(static_cast<int>(state.range(0)), rng);
  auto m = forward_moments(g, sample_params<double>(g, 2));
  for (auto _ : state) benchmark::DoNotOptimize(decide_membership(g, m));
}
BENCHMARK(BM_MembershipFloat)->Arg(4)->Arg(8);

static void BM_PolytopeLp(benchmark::State& state) {
  HRep h = h_rep(star_graph(static_cast<int>(state.range(0))));
  std::vector<Rational> c(h.dim());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = Rational(static_cast<long>(k % 5) - 2);
  for (auto _ : state) benchmark::DoNotOptimize(lp_maximize(h, c));
}
BENCHMARK(BM_PolytopeLp)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
