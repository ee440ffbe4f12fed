#pragma once

// Hand-rolled random inputs for property tests.

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/moments.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline mpq_class rational(Rng& rng, long max_num = 6, long max_den = 5, bool positive = false) {
  long num = positive ? uniform(rng, 1, max_num) : uniform(rng, -max_num, max_num);
  mpq_class q(num, uniform(rng, 1, max_den));
  q.canonicalize();
  return q;
}

/// Random labelled tree from a Pruefer sequence, each edge oriented by a coin.
inline treksem::DirectedGraph polytree(Rng& rng, int n) {
  if (n == 1) return treksem::DirectedGraph(1, {});
  std::vector<int> seq(n - 2);
  for (int& v : seq) v = static_cast<int>(uniform(rng, 0, n - 1));
  std::vector<int> degree(n, 1);
  for (int v : seq) ++degree[v];
  std::vector<treksem::Edge> edges;
  auto add = [&](int a, int b) { edges.push_back(rng() & 1 ? treksem::Edge{a, b} : treksem::Edge{b, a}); };
  for (int v : seq) {
    int leaf = static_cast<int>(std::find(degree.begin(), degree.end(), 1) - degree.begin());
    add(leaf, v);
    --degree[leaf];
    --degree[v];
  }
  int a = -1, b = -1;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) (a < 0 ? a : b) = v;
  add(a, b);
  std::shuffle(edges.begin(), edges.end(), rng);
  return treksem::DirectedGraph(n, edges);
}

/// Random DAG: random vertex order, each forward pair is an edge with
/// probability `density` percent.
inline treksem::DirectedGraph dag(Rng& rng, int n, int density = 40) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<treksem::Edge> edges;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (uniform(rng, 0, 99) < density) edges.push_back({order[x], order[y]});
  std::shuffle(edges.begin(), edges.end(), rng);
  return treksem::DirectedGraph(n, edges);
}

inline treksem::ModelParameters<mpq_class> params(Rng& rng, const treksem::DirectedGraph& g) {
  treksem::ModelParameters<mpq_class> p;
  for (std::size_t e = 0; e < g.num_edges(); ++e) p.lambda.push_back(rational(rng));
  for (int v = 0; v < g.size(); ++v) {
    p.omega2.push_back(rational(rng, 6, 5, true));
    p.omega3.push_back(rational(rng));
  }
  return p;
}

inline std::pair<std::vector<std::pair<int, int>>, int> edge_list(const treksem::DirectedGraph& g) {
  std::vector<std::pair<int, int>> e;
  for (const auto& x : g.edges()) e.emplace_back(x.tail, x.head);
  return {e, g.size()};
}

}  // namespace gen
