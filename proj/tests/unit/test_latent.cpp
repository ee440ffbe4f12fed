#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "treksem/error.hpp"
#include "treksem/families.hpp"
#include "treksem/latent.hpp"
#include "treksem/membership.hpp"

using namespace treksem;

namespace {

MomentVariable s(int i, int j) { return MomentVariable::cov(i - 1, j - 1); }
MomentVariable t(int i, int j, int k) { return MomentVariable::third(i - 1, j - 1, k - 1); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("partition validation") {
  DirectedGraph star = star_graph(4);
  auto part = validate_upstream(star, {0}, {1, 2, 3, 4});
  CHECK(part.hidden() == std::vector<Vertex>{0});
  CHECK(part.is_observed(3));
  CHECK(part.is_hidden(0));

  DirectedGraph two(2, {{0, 1}});
  try {
    validate_upstream(two, {1}, {0});
    FAIL("expected DownstreamEdge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DownstreamEdge);
    CHECK(std::string(e.what()).find("1->2") != std::string::npos);
  }
  CHECK(validate_upstream(two, {}, {0, 1}).hidden().empty());
  CHECK(code_of([&] { validate_upstream(two, {0}, {0, 1}); }) == ErrorCode::NotPartition);
  CHECK(code_of([&] { validate_upstream(two, {}, {0}); }) == ErrorCode::NotPartition);
  CHECK(code_of([&] { validate_upstream(two, {2}, {0, 1}); }) == ErrorCode::NotPartition);
  CHECK(upstream_from_hidden(star, {0}).observed() == std::vector<Vertex>{1, 2, 3, 4});

  // ancestrally closed sets of 1 -> 2 -> 3: {}, {1}, {1,2}, {1,2,3}
  CHECK(all_upstream_partitions(chain_graph(3)).size() == 4);
  // star: {} plus {1} joined with any subset of the leaves
  CHECK(all_upstream_partitions(star).size() == 17);
}

TEST_CASE("multidegrees") {
  auto part = upstream_from_hidden(star_graph(4), {0});
  CHECK(variable_multidegree(s(2, 3), part) == MultiDegree{1, 3});
  CHECK(variable_multidegree(t(2, 3, 4), part) == MultiDegree{1, 3});
  CHECK(variable_multidegree(t(1, 2, 3), part) == MultiDegree{1, 2});
  CHECK(variable_multidegree(s(1, 1), part) == MultiDegree{1, 1});
  CHECK(monomial_multidegree(Monomial{s(1, 2), s(3, 4)}, part) == MultiDegree{2, 5});
  CHECK(monomial_multidegree(Monomial{s(1, 3), s(1, 4)}, part) == MultiDegree{2, 4});
  CHECK_FALSE(check_homogeneous(Binomial(Monomial{s(1, 2), s(3, 4)}, Monomial{s(1, 3), s(1, 4)}), part));

  DirectedGraph star = star_graph(4);
  for (const Quadric& q : full_generator_set(star).quadrics) CHECK(check_homogeneous(q.binomial, part));
}

TEST_CASE("generators are homogeneous under every upstream partition") {
  gen::Rng rng(6);
  for (int trial = 0; trial < 25; ++trial) {
    DirectedGraph g = gen::polytree(rng, 2 + trial % 6);
    GeneratorSet full = full_generator_set(g);
    for (const auto& part : all_upstream_partitions(g))
      for (const Quadric& q : full.quadrics) CHECK(check_homogeneous(q.binomial, part));
  }
}

TEST_CASE("parameter degrees induce the grading") {
  gen::Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    DirectedGraph g = gen::polytree(rng, 2 + trial % 6);
    TrekTable table(g);
    for (const auto& part : all_upstream_partitions(g))
      for (const MomentVariable& v : table.variables().all()) {
        const auto& trek = table.trek(v);
        if (!trek) continue;
        MultiDegree d = v.is_cov() ? a_degree(trek->top, part) : b_degree(trek->top, part);
        auto mult = trek->edge_multiplicities(g);
        for (std::size_t e = 0; e < mult.size(); ++e)
          for (int r = 0; r < mult[e]; ++r) d += lambda_degree(g.edges()[e], part);
        CHECK(d == variable_multidegree(v, part));
      }
  }
}

TEST_CASE("observed generators on the star") {
  DirectedGraph star = star_graph(4);
  auto part = upstream_from_hidden(star, {0});
  GeneratorSet obs = observed_generators(star, part);
  CHECK(obs.linear.empty());
  CHECK(degree2_span_rank(obs) == 126);

  // restricted A_23: vertex columns 4, 5 and pair columns 23 24 25 34 35 44 45 55
  TrekMatrix a23 = trek_matrix(star, 1, 2);
  std::vector<ColumnLabel> kept;
  for (const ColumnLabel& c : a23.columns) {
    auto idx = c.indices();
    if (std::all_of(idx.begin(), idx.end(), [&](Vertex v) { return part.is_observed(v); })) kept.push_back(c);
  }
  std::vector<std::string> labels;
  for (const auto& c : kept) labels.push_back(column_name(c, 5));
  CHECK(labels == std::vector<std::string>{"4", "5", "23", "24", "25", "34", "35", "44", "45", "55"});
  std::set<Binomial> from_obs;
  for (const auto& q : obs.quadrics) from_obs.insert(q.binomial);
  for (std::size_t x = 0; x < kept.size(); ++x)
    for (std::size_t y = x + 1; y < kept.size(); ++y) {
      Binomial b(Monomial{combine(1, kept[x]), combine(2, kept[y])}, Monomial{combine(1, kept[y]), combine(2, kept[x])});
      CHECK(from_obs.count(b));
    }
}

TEST_CASE("no hidden vertices gives the full generator set") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    DirectedGraph g = gen::polytree(rng, 1 + trial % 7);
    auto obs = observed_generators(g, upstream_from_hidden(g, {}));
    auto full = full_generator_set(g);
    CHECK(obs.linear == full.linear);
    std::set<Binomial> a, b;
    for (const auto& q : obs.quadrics) a.insert(q.binomial);
    for (const auto& q : full.quadrics) b.insert(q.binomial);
    CHECK(a == b);
  }
}

TEST_CASE("observed generators vanish on observed marginals") {
  gen::Rng rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    DirectedGraph g = gen::polytree(rng, 2 + trial % 6);
    auto parts = all_upstream_partitions(g);
    const auto& part = parts[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<long>(parts.size()) - 1))];
    auto m = observed_marginal(forward_moments(g, gen::params(rng, g)), part);
    VariableIndex idx(g.size());
    for (const auto& v : idx.all()) {
      bool hidden = std::any_of(v.indices().begin(), v.indices().end(), [&](Vertex x) { return part.is_hidden(x); });
      if (hidden) CHECK(m.value(v) == 0);
    }
    CHECK(evaluate_generators(observed_generators(g, part), m).max_abs_residual == 0);
  }
}

TEST_CASE("observed generators need a polytree") {
  DirectedGraph triangle(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(code_of([&] { observed_generators(triangle, upstream_from_hidden(triangle, {0})); }) == ErrorCode::NotPolytree);
}
