#include "treksem/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

#include "treksem/error.hpp"

namespace treksem {

DirectedGraph::DirectedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), parents_(n > 0 ? n : 0), children_(n > 0 ? n : 0) {
  if (n < 1) throw Error(ErrorCode::InvalidGraph, "graph needs at least one vertex");
  std::vector<Edge> seen;
  for (const Edge& e : edges_) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw Error(ErrorCode::InvalidGraph, "edge " + std::to_string(e.tail + 1) + "->" +
                                               std::to_string(e.head + 1) + " has an endpoint outside 1.." +
                                               std::to_string(n));
    if (e.tail == e.head)
      throw Error(ErrorCode::InvalidGraph, "self-loop at vertex " + std::to_string(e.tail + 1));
    seen.push_back(e);
  }
  std::sort(seen.begin(), seen.end());
  auto dup = std::adjacent_find(seen.begin(), seen.end());
  if (dup != seen.end())
    throw Error(ErrorCode::InvalidGraph, "duplicate edge " + std::to_string(dup->tail + 1) + "->" +
                                             std::to_string(dup->head + 1));
  for (const Edge& e : edges_) {
    parents_[e.head].push_back(e.tail);
    children_[e.tail].push_back(e.head);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());
}

std::optional<std::size_t> DirectedGraph::edge_index(Vertex tail, Vertex head) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].tail == tail && edges_[i].head == head) return i;
  return std::nullopt;
}

std::string_view to_string(GraphClass c) {
  switch (c) {
    case GraphClass::Cyclic: return "cyclic";
    case GraphClass::Dag: return "dag";
    case GraphClass::Polytree: return "polytree";
    case GraphClass::Polyforest: return "polyforest";
  }
  return "unknown";
}

bool is_acyclic(const DirectedGraph& g) {
  std::vector<int> indegree(g.size());
  for (const Edge& e : g.edges()) ++indegree[e.head];
  std::vector<Vertex> ready;
  for (Vertex v = 0; v < g.size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  int visited = 0;
  while (!ready.empty()) {
    Vertex v = ready.back();
    ready.pop_back();
    ++visited;
    for (Vertex c : g.children(v))
      if (--indegree[c] == 0) ready.push_back(c);
  }
  return visited == g.size();
}

GraphClass classify(const DirectedGraph& g) {
  if (!is_acyclic(g)) return GraphClass::Cyclic;
  std::vector<int> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int components = g.size();
  for (const Edge& e : g.edges()) {
    int a = find(e.tail), b = find(e.head);
    if (a == b) return GraphClass::Dag;
    parent[a] = b;
    --components;
  }
  return components == 1 ? GraphClass::Polytree : GraphClass::Polyforest;
}

void require_forest(const DirectedGraph& g) {
  GraphClass c = classify(g);
  if (c != GraphClass::Polytree && c != GraphClass::Polyforest)
    throw Error(ErrorCode::NotPolytree, "polytree required, graph is " + std::string(to_string(c)));
}

std::vector<Vertex> topological_order(const DirectedGraph& g) {
  std::vector<int> indegree(g.size());
  for (const Edge& e : g.edges()) ++indegree[e.head];
  // Smallest ready label first, so already-ordered labels come back unchanged.
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 0; v < g.size(); ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<Vertex> order;
  while (!ready.empty()) {
    Vertex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Vertex c : g.children(v))
      if (--indegree[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != g.size())
    throw Error(ErrorCode::CyclicGraph, "graph has a directed cycle");
  return order;
}

std::vector<Vertex> Trek::sinks() const {
  std::vector<Vertex> out;
  for (const auto& p : paths) out.push_back(p.back());
  return out;
}

std::vector<int> Trek::edge_multiplicities(const DirectedGraph& g) const {
  std::vector<int> mult(g.num_edges(), 0);
  for (const auto& p : paths)
    for (std::size_t s = 1; s < p.size(); ++s) ++mult[*g.edge_index(p[s - 1], p[s])];
  return mult;
}

namespace {

class TrekSearch {
 public:
  TrekSearch(const DirectedGraph& g, std::span<const Vertex> sinks, std::vector<Trek>& out)
      : g_(g), sinks_(sinks), k_(static_cast<int>(sinks.size())), count_(g.size(), 0),
        reach_(g.size(), std::vector<bool>(g.size(), false)), out_(out) {
    std::vector<Vertex> order = topological_order(g);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Vertex v = *it;
      reach_[v][v] = true;
      for (Vertex c : g.children(v))
        for (Vertex w = 0; w < g.size(); ++w)
          if (reach_[c][w]) reach_[v][w] = true;
    }
  }

  void run() {
    for (Vertex v = 0; v < g_.size(); ++v) {
      bool reaches_all = std::all_of(sinks_.begin(), sinks_.end(), [&](Vertex s) { return reach_[v][s]; });
      if (!reaches_all) continue;
      top_ = v;
      paths_.assign(k_, {});
      start_path(0);
    }
  }

 private:
  void start_path(int r) {
    if (r == k_) {
      out_.push_back(Trek{top_, paths_});
      return;
    }
    paths_[r] = {top_};
    extend(r, top_);
  }

  void extend(int r, Vertex cur) {
    if (cur == sinks_[r]) {
      start_path(r + 1);
      return;
    }
    for (Vertex c : g_.children(cur)) {
      if (!reach_[c][sinks_[r]]) continue;
      if (count_[c] + 1 == k_) continue;  // c would lie on every path
      ++count_[c];
      paths_[r].push_back(c);
      extend(r, c);
      paths_[r].pop_back();
      --count_[c];
    }
  }

  const DirectedGraph& g_;
  std::span<const Vertex> sinks_;
  int k_;
  std::vector<int> count_;
  std::vector<std::vector<bool>> reach_;
  std::vector<Trek>& out_;
  Vertex top_ = 0;
  std::vector<std::vector<Vertex>> paths_;
};

}  // namespace

std::vector<Trek> enumerate_simple_treks(const DirectedGraph& g, std::span<const Vertex> sinks) {
  if (sinks.size() != 2 && sinks.size() != 3)
    throw Error(ErrorCode::InvalidArgument, "treks are supported for k = 2 or 3 sinks");
  for (Vertex s : sinks)
    if (s < 0 || s >= g.size()) throw Error(ErrorCode::InvalidArgument, "sink outside the vertex range");
  if (!is_acyclic(g)) throw Error(ErrorCode::CyclicGraph, "trek enumeration needs an acyclic graph");
  std::vector<Trek> out;
  TrekSearch(g, sinks, out).run();
  return out;
}

std::optional<Vertex> top(const DirectedGraph& g, std::span<const Vertex> sinks) {
  require_forest(g);
  std::vector<Trek> treks = enumerate_simple_treks(g, sinks);
  if (treks.empty()) return std::nullopt;
  return treks.front().top;
}

}  // namespace treksem
