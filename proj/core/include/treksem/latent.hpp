#pragma once

#include <compare>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/moments.hpp"
#include "treksem/trekmat.hpp"

namespace treksem {

/// Hidden/observed split of the vertices with no edge observed -> hidden.
class UpstreamPartition {
 public:
  const std::vector<Vertex>& hidden() const noexcept { return hidden_; }
  const std::vector<Vertex>& observed() const noexcept { return observed_; }
  bool is_hidden(Vertex v) const { return flag_[v]; }
  bool is_observed(Vertex v) const { return !flag_[v]; }

 private:
  friend UpstreamPartition validate_upstream(const DirectedGraph&, std::vector<Vertex>, std::vector<Vertex>);
  std::vector<Vertex> hidden_;
  std::vector<Vertex> observed_;
  std::vector<bool> flag_;
};

/// Throws NotPartition when H and O overlap, miss a vertex or name one that
/// does not exist, and DownstreamEdge naming the first edge o -> h.
UpstreamPartition validate_upstream(const DirectedGraph& g, std::vector<Vertex> hidden, std::vector<Vertex> observed);

/// O is the complement of H.
UpstreamPartition upstream_from_hidden(const DirectedGraph& g, std::vector<Vertex> hidden);

/// Every valid upstream partition of g (H ranges over the ancestrally closed
/// vertex sets, including the empty set and V).
std::vector<UpstreamPartition> all_upstream_partitions(const DirectedGraph& g);

struct MultiDegree {
  int first = 0;
  int second = 0;

  MultiDegree& operator+=(const MultiDegree& o) {
    first += o.first;
    second += o.second;
    return *this;
  }
  friend MultiDegree operator+(MultiDegree a, const MultiDegree& b) { return a += b; }
  friend auto operator<=>(const MultiDegree&, const MultiDegree&) = default;
};

/// deg s_ij = (1, 1 + #observed among {i,j}), deg t_ijk = (1, #observed among {i,j,k}).
MultiDegree variable_multidegree(const MomentVariable& v, const UpstreamPartition& part);
MultiDegree monomial_multidegree(const Monomial& m, const UpstreamPartition& part);
bool check_homogeneous(const Binomial& f, const UpstreamPartition& part);

/// Degrees of the parameters that induce the grading above:
/// a_h (1,1), a_o (1,3), b_h (1,0), b_o (1,3), lambda_ho (0,1), other lambda (0,0).
MultiDegree a_degree(Vertex v, const UpstreamPartition& part);
MultiDegree b_degree(Vertex v, const UpstreamPartition& part);
MultiDegree lambda_degree(const Edge& e, const UpstreamPartition& part);

/// Minors of the trek matrices A_{i,j} (i, j observed) restricted to columns
/// with only observed labels, plus the linear generators with only observed
/// indices; deduplicated.  Throws NotPolytree.
GeneratorSet observed_generators(const DirectedGraph& g, const UpstreamPartition& part);

/// Copy of m with every entry that involves a hidden index set to zero.
template <class Scalar>
MomentData<Scalar> observed_marginal(const MomentData<Scalar>& m, const UpstreamPartition& part);

}  // namespace treksem
