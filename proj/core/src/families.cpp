#include "treksem/families.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "treksem/error.hpp"

namespace treksem {

DirectedGraph star_graph(int leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.push_back({0, v});
  return DirectedGraph(leaves + 1, e);
}

DirectedGraph chain_graph(int n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return DirectedGraph(n, e);
}

DirectedGraph random_polytree(int n, std::mt19937_64& rng) {
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) {
    Vertex u = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(v));
    if (rng() & 1)
      e.push_back({label[u], label[v]});
    else
      e.push_back({label[v], label[u]});
  }
  return DirectedGraph(n, e);
}

namespace {

std::uint64_t best_mask(const DirectedGraph& g) {
  const int n = g.size();
  if (n > 8) throw Error(ErrorCode::InvalidArgument, "canonical form is limited to 8 vertices");
  std::vector<Vertex> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t mask = 0;
    for (const Edge& e : g.edges()) mask |= std::uint64_t{1} << (p[e.tail] * n + p[e.head]);
    best = std::min(best, mask);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

DirectedGraph from_mask(int n, std::uint64_t mask) {
  std::vector<Edge> e;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b)
      if (mask >> (a * n + b) & 1) e.push_back({a, b});
  return DirectedGraph(n, e);
}

// Representatives built by extending every class on n - 1 vertices; the
// extension is supplied per graph.
template <class Extend>
std::vector<DirectedGraph> grow(const std::vector<DirectedGraph>& smaller, int n, Extend extend) {
  std::set<std::uint64_t> seen;
  std::vector<DirectedGraph> out;
  for (const DirectedGraph& g : smaller)
    for (DirectedGraph& h : extend(g)) {
      std::uint64_t key = best_mask(h);
      if (seen.insert(key).second) out.push_back(from_mask(n, key));
    }
  return out;
}

}  // namespace

std::string canonical_key(const DirectedGraph& g) {
  return std::to_string(g.size()) + ":" + std::to_string(best_mask(g));
}

std::vector<DirectedGraph> polytrees_up_to_isomorphism(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one vertex");
  std::vector<DirectedGraph> cur{DirectedGraph(1, {})};
  for (int k = 2; k <= n; ++k)
    cur = grow(cur, k, [k](const DirectedGraph& g) {
      std::vector<DirectedGraph> out;
      for (Vertex u = 0; u < k - 1; ++u)
        for (bool outward : {true, false}) {
          std::vector<Edge> e = g.edges();
          e.push_back(outward ? Edge{u, k - 1} : Edge{k - 1, u});
          out.emplace_back(k, e);
        }
      return out;
    });
  return cur;
}

std::vector<DirectedGraph> labelled_polytrees(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one vertex");
  if (n > 6) throw Error(ErrorCode::InvalidArgument, "labelled enumeration is limited to 6 vertices");
  std::vector<DirectedGraph> out;
  if (n == 1) return {DirectedGraph(1, {})};
  std::vector<std::vector<std::pair<Vertex, Vertex>>> trees;
  // Pruefer decoding of every sequence of length n - 2.
  std::vector<Vertex> seq(n - 2, 0);
  for (;;) {
    std::vector<int> degree(n, 1);
    for (Vertex v : seq) ++degree[v];
    std::vector<std::pair<Vertex, Vertex>> t;
    for (Vertex v : seq) {
      Vertex leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      t.emplace_back(leaf, v);
      --degree[leaf];
      --degree[v];
    }
    Vertex a = -1, b = -1;
    for (Vertex v = 0; v < n; ++v)
      if (degree[v] == 1) (a < 0 ? a : b) = v;
    t.emplace_back(a, b);
    trees.push_back(t);
    std::size_t pos = 0;
    while (pos < seq.size() && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == seq.size()) break;
  }
  for (const auto& t : trees)
    for (unsigned orient = 0; orient < (1u << (n - 1)); ++orient) {
      std::vector<Edge> e;
      for (std::size_t k = 0; k < t.size(); ++k) {
        auto [x, y] = t[k];
        e.push_back(orient >> k & 1 ? Edge{y, x} : Edge{x, y});
      }
      out.emplace_back(n, e);
    }
  return out;
}

std::vector<DirectedGraph> dags_up_to_isomorphism(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one vertex");
  if (n > 7) throw Error(ErrorCode::InvalidArgument, "DAG enumeration is limited to 7 vertices");
  std::vector<DirectedGraph> cur{DirectedGraph(1, {})};
  // Every DAG has a sink; deleting it leaves a DAG on one vertex fewer.
  for (int k = 2; k <= n; ++k)
    cur = grow(cur, k, [k](const DirectedGraph& g) {
      std::vector<DirectedGraph> out;
      for (unsigned parents = 0; parents < (1u << (k - 1)); ++parents) {
        std::vector<Edge> e = g.edges();
        for (Vertex u = 0; u < k - 1; ++u)
          if (parents >> u & 1) e.push_back({u, k - 1});
        out.emplace_back(k, e);
      }
      return out;
    });
  return cur;
}

}  // namespace treksem
