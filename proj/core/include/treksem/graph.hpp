#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace treksem {

/// Vertices are 0-based internally.  Everything that reads or writes text
/// (JSON, CLI, emitted generators) shifts to 1-based labels.
using Vertex = int;

struct Edge {
  Vertex tail = 0;
  Vertex head = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable directed graph.  Self-loops, duplicate edges and endpoints
/// outside [0, n) are rejected at construction with Error(InvalidGraph).
class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int n, std::vector<Edge> edges);

  int size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::vector<Vertex>& parents(Vertex v) const { return parents_[v]; }
  const std::vector<Vertex>& children(Vertex v) const { return children_[v]; }

  /// Position of tail->head in edges(), if present.
  std::optional<std::size_t> edge_index(Vertex tail, Vertex head) const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> parents_;
  std::vector<std::vector<Vertex>> children_;
};

enum class GraphClass { Cyclic, Dag, Polytree, Polyforest };

std::string_view to_string(GraphClass c);

/// Polytree: acyclic and the underlying undirected graph is a connected
/// tree.  Polyforest: acyclic, undirected-acyclic, disconnected.  A single
/// vertex counts as a polytree.
GraphClass classify(const DirectedGraph& g);

bool is_acyclic(const DirectedGraph& g);

/// Requires the graph to be a polytree or polyforest; throws NotPolytree.
void require_forest(const DirectedGraph& g);

/// Permutation of the vertices with every edge pointing forward.  Returns
/// the identity whenever the labels already have that property.  Throws
/// Error(CyclicGraph) when a directed cycle exists.
std::vector<Vertex> topological_order(const DirectedGraph& g);

/// A k-trek: k directed paths sharing a common source.  Each path is stored
/// as the vertex sequence it visits, starting at the top; an empty path is
/// the one-element sequence {top}.
struct Trek {
  Vertex top = 0;
  std::vector<std::vector<Vertex>> paths;

  std::vector<Vertex> sinks() const;
  /// Multiplicity of every edge of g across all paths, indexed like g.edges().
  std::vector<int> edge_multiplicities(const DirectedGraph& g) const;

  friend bool operator==(const Trek&, const Trek&) = default;
};

/// All simple k-treks (k = 2 or 3) whose r-th path ends at sinks[r]: the top
/// is the only vertex lying on all k paths.  Throws CyclicGraph on cyclic
/// input and InvalidArgument when k is not 2 or 3.
std::vector<Trek> enumerate_simple_treks(const DirectedGraph& g,
                                         std::span<const Vertex> sinks);

/// Top of the unique simple trek between the sinks on a polytree (or
/// polyforest), or nullopt when no trek exists.  Throws NotPolytree.
std::optional<Vertex> top(const DirectedGraph& g, std::span<const Vertex> sinks);

}  // namespace treksem
