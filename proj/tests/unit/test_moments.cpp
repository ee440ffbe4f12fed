#include <doctest.h>

#include <algorithm>
#include <array>

#include "generators.hpp"
#include "oracles.hpp"
#include "treksem/error.hpp"
#include "treksem/families.hpp"
#include "treksem/moments.hpp"

using namespace treksem;

namespace {

DirectedGraph triangle() { return DirectedGraph(3, {{0, 1}, {0, 2}, {1, 2}}); }

ModelParameters<Rational> two_node() { return {{Rational(2)}, {Rational(1), Rational(1)}, {Rational(1), Rational(1)}}; }

oracle::Dense dense(const SymMatrix<Rational>& s) {
  oracle::Dense d(s.size(), std::vector<Rational>(s.size()));
  for (int i = 0; i < s.size(); ++i)
    for (int j = 0; j < s.size(); ++j) d[i][j] = s.at(i, j);
  return d;
}

void check_against_oracle(const DirectedGraph& g, const ModelParameters<Rational>& p, const MomentData<Rational>& m) {
  auto [edges, n] = gen::edge_list(g);
  auto ref = oracle::moments(n, edges, p.lambda, p.omega2, p.omega3);
  REQUIRE(ref);
  CHECK(dense(m.cov) == ref->s);
  for (const auto& [idx, value] : ref->t) CHECK(m.third.at(idx[0], idx[1], idx[2]) == value);
}

std::vector<TrekTerm> sorted(std::vector<TrekTerm> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("two-node model values") {
  DirectedGraph g(2, {{0, 1}});
  auto m = forward_moments(g, two_node());
  CHECK(m.cov.at(0, 0) == 1);
  CHECK(m.cov.at(0, 1) == 2);
  CHECK(m.cov.at(1, 1) == 5);
  CHECK(m.third.at(0, 0, 0) == 1);
  CHECK(m.third.at(0, 0, 1) == 2);
  CHECK(m.third.at(1, 0, 1) == 4);
  CHECK(m.third.at(1, 1, 1) == 9);
  CHECK(recursive_moments(g, two_node()) == m);

  auto ab = params_to_ab(g, two_node());
  CHECK(ab.a == std::vector<Rational>{1, 5});
  CHECK(ab.b == std::vector<Rational>{1, 9});
  CHECK(ab.lambda == two_node().lambda);
  CHECK(trek_rule_moments(g, ab) == m);
}

TEST_CASE("zero edge weights give diagonal moments") {
  DirectedGraph g = star_graph(3);
  ModelParameters<Rational> p{{0, 0, 0}, {1, 2, 3, 4}, {5, 0, Rational(1, 2), -1}};
  auto m = forward_moments(g, p);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(m.cov.at(i, j) == (i == j ? p.omega2[i] : 0));
      for (int k = 0; k < 4; ++k) CHECK(m.third.at(i, j, k) == (i == j && j == k ? p.omega3[i] : 0));
    }
}

TEST_CASE("singular and malformed inputs") {
  DirectedGraph cycle(2, {{0, 1}, {1, 0}});
  ModelParameters<Rational> p{{1, 1}, {1, 1}, {1, 1}};
  CHECK_THROWS_AS(forward_moments(cycle, p), Error);
  try {
    forward_moments(cycle, p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
  }
  ModelParameters<double> pf{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(forward_moments(cycle, pf), Error);

  // a cyclic graph with an invertible system still has moments
  ModelParameters<Rational> q{{Rational(1, 2), 3}, {1, 1}, {1, 1}};
  auto m = forward_moments(cycle, q);
  check_against_oracle(cycle, q, m);
  CHECK_THROWS_AS(recursive_moments(cycle, q), Error);
  CHECK_THROWS_AS(params_to_ab(cycle, q), Error);
  CHECK_THROWS_AS(TrekExpansion{cycle}, Error);

  ModelParameters<Rational> short_lambda{{}, {1, 1}, {1, 1}};
  try {
    forward_moments(DirectedGraph(2, {{0, 1}}), short_lambda);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("source vertices keep their error moments") {
  DirectedGraph g(4, {{0, 2}, {1, 2}, {2, 3}});
  gen::Rng rng(3);
  auto p = gen::params(rng, g);
  auto ab = params_to_ab(g, p);
  CHECK(ab.a[0] == p.omega2[0]);
  CHECK(ab.a[1] == p.omega2[1]);
  CHECK(ab.b[0] == p.omega3[0]);
  CHECK(ab.b[1] == p.omega3[1]);
}

TEST_CASE("trek-rule images on the triangle") {
  TrekExpansion x(triangle());
  // edges: 0 = 1->2, 1 = 1->3, 2 = 2->3
  CHECK(sorted(x.terms(MomentVariable::cov(0, 2))) ==
        sorted({TrekTerm{0, {{1, 1}}, 1}, TrekTerm{0, {{0, 1}, {2, 1}}, 1}}));
  CHECK(sorted(x.terms(MomentVariable::cov(1, 2))) ==
        sorted({TrekTerm{0, {{0, 1}, {1, 1}}, 1}, TrekTerm{1, {{2, 1}}, 1}}));
  CHECK(sorted(x.terms(MomentVariable::third(0, 1, 2))) ==
        sorted({TrekTerm{0, {{0, 1}, {1, 1}}, 1}, TrekTerm{0, {{0, 2}, {2, 1}}, 1}}));

  TrekExpansion star(star_graph(4));
  CHECK(star.terms(MomentVariable::cov(1, 2)) == std::vector<TrekTerm>{TrekTerm{0, {{0, 1}, {1, 1}}, 1}});
  CHECK(star.terms(MomentVariable::third(1, 1, 1)) == std::vector<TrekTerm>{TrekTerm{1, {}, 1}});
}

TEST_CASE("trek-rule images match brute-force treks") {
  gen::Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    DirectedGraph g = gen::dag(rng, 2 + trial % 4, 50);
    auto [edges, n] = gen::edge_list(g);
    TrekExpansion x(g);
    VariableIndex idx(n);
    for (const MomentVariable& v : idx.all()) {
      std::vector<int> sinks(v.indices().begin(), v.indices().end());
      std::map<std::pair<int, std::vector<int>>, long> expected;
      for (const auto& t : oracle::simple_treks(n, edges, sinks)) {
        std::vector<int> powers(edges.size(), 0);
        for (const auto& path : t.paths)
          for (std::size_t s = 0; s + 1 < path.size(); ++s)
            for (std::size_t e = 0; e < edges.size(); ++e)
              if (edges[e] == std::make_pair(path[s], path[s + 1])) ++powers[e];
        ++expected[{t.top, powers}];
      }
      std::map<std::pair<int, std::vector<int>>, long> got;
      for (const TrekTerm& term : x.terms(v)) {
        std::vector<int> powers(edges.size(), 0);
        for (auto [e, k] : term.edge_powers) powers[e] = k;
        got[{term.top, powers}] += term.coefficient;
      }
      CHECK(got == expected);
    }
  }
}

TEST_CASE("forward moments agree with the dense oracle and the other routes") {
  gen::Rng rng(99);
  for (int trial = 0; trial < 80; ++trial) {
    DirectedGraph g = trial % 2 ? gen::dag(rng, 1 + trial % 6) : gen::polytree(rng, 1 + trial % 7);
    auto p = gen::params(rng, g);
    auto m = forward_moments(g, p);
    check_against_oracle(g, p, m);
    CHECK(recursive_moments(g, p) == m);
    CHECK(trek_rule_moments(g, params_to_ab(g, p)) == m);
    CHECK(TrekExpansion(g).evaluate(params_to_ab(g, p)) == m);
    CHECK(oracle::positive_definite(dense(m.cov)));

    // general Tucker / congruence routines on the diagonal error moments
    auto b = transfer_matrix(g, p.lambda);
    SymMatrix<Rational> w2(g.size());
    SymTensor3<Rational> w3(g.size());
    for (int v = 0; v < g.size(); ++v) {
      w2.at(v, v) = p.omega2[v];
      w3.at(v, v, v) = p.omega3[v];
    }
    CHECK(congruence(w2, b) == m.cov);
    CHECK(tucker(w3, b) == m.third);

    auto pf = to_float(p);
    auto mf = forward_moments(g, pf);
    auto conv = to_float(m);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) {
        CHECK(mf.cov.at(i, j) == doctest::Approx(conv.cov.at(i, j)).epsilon(1e-9));
        for (int k = 0; k < g.size(); ++k)
          CHECK(mf.third.at(i, j, k) == doctest::Approx(conv.third.at(i, j, k)).epsilon(1e-9));
      }
  }
}

TEST_CASE("zero third error moments give T = 0") {
  gen::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph g = gen::dag(rng, 2 + trial % 5);
    auto p = gen::params(rng, g);
    std::fill(p.omega3.begin(), p.omega3.end(), Rational(0));
    CHECK(forward_moments(g, p).third == SymTensor3<Rational>(g.size()));
  }
}

TEST_CASE("third moments vanish exactly where no 3-trek exists") {
  SampleConfig cfg;
  cfg.allow_zero_lambda = false;
  cfg.allow_zero_omega3 = false;
  gen::Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    DirectedGraph g = gen::polytree(rng, 2 + trial % 6);
    auto m = forward_moments(g, sample_params<Rational>(g, 100 + trial, cfg));
    for (Vertex i = 0; i < g.size(); ++i)
      for (Vertex j = i; j < g.size(); ++j)
        for (Vertex k = j; k < g.size(); ++k) {
          std::array<Vertex, 3> s{i, j, k};
          CHECK((m.third.at(i, j, k) == 0) == enumerate_simple_treks(g, s).empty());
        }
  }
}

TEST_CASE("sampling") {
  DirectedGraph g = star_graph(4);
  CHECK(sample_params<Rational>(g, 5) == sample_params<Rational>(g, 5));
  CHECK_FALSE(sample_params<Rational>(g, 5) == sample_params<Rational>(g, 6));
  SampleConfig cfg;
  cfg.allow_zero_omega3 = false;
  cfg.max_numerator = 3;
  cfg.max_denominator = 2;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto p = sample_params<Rational>(g, seed, cfg);
    for (const auto& w : p.omega2) CHECK(w > 0);
    for (const auto& w : p.omega3) CHECK(w != 0);
    for (const auto& l : p.lambda) {
      CHECK(abs(l.get_num()) <= 3);
      CHECK(l.get_den() <= 2);
    }
    auto f = sample_params<double>(g, seed, cfg);
    CHECK(f == to_float(p));
    CHECK(oracle::positive_definite(dense(forward_moments(g, p).cov)));
  }
}

TEST_CASE("marginal relabels the kept vertices") {
  DirectedGraph g(2, {{0, 1}});
  auto m = forward_moments(g, two_node());
  auto k = marginal(m, {1});
  REQUIRE(k.size() == 1);
  CHECK(k.cov.at(0, 0) == 5);
  CHECK(k.third.at(0, 0, 0) == 9);
  CHECK(m.max_abs() == 9.0);
}
