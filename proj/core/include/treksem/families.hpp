#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "treksem/graph.hpp"

namespace treksem {

/// Vertex 1 pointing at every other vertex.
DirectedGraph star_graph(int leaves);

/// 1 -> 2 -> ... -> n.
DirectedGraph chain_graph(int n);

/// Random polytree: each new vertex attaches to a uniformly chosen earlier
/// one with a random orientation, then the labels are shuffled.
DirectedGraph random_polytree(int n, std::mt19937_64& rng);

/// Canonical string of g under vertex relabelling: two graphs get the same
/// key exactly when they are isomorphic.  Exhaustive over permutations, so
/// meant for n <= 8.
std::string canonical_key(const DirectedGraph& g);

/// One representative per isomorphism class of polytrees on n vertices
/// (1, 1, 3, 8, 27, 91, 350 for n = 1..7).
std::vector<DirectedGraph> polytrees_up_to_isomorphism(int n);

/// Every labelled polytree on n vertices (n^(n-2) trees times 2^(n-1)
/// orientations).
std::vector<DirectedGraph> labelled_polytrees(int n);

/// One representative per isomorphism class of DAGs on n vertices
/// (1, 2, 6, 31, 302, 5984 for n = 1..6).
std::vector<DirectedGraph> dags_up_to_isomorphism(int n);

}  // namespace treksem
