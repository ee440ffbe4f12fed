#include "treksem/latent.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "treksem/error.hpp"

namespace treksem {

UpstreamPartition validate_upstream(const DirectedGraph& g, std::vector<Vertex> hidden, std::vector<Vertex> observed) {
  const int n = g.size();
  std::vector<int> seen(n, 0);
  for (const auto* part : {&hidden, &observed})
    for (Vertex v : *part) {
      if (v < 0 || v >= n) throw Error(ErrorCode::NotPartition, "vertex " + std::to_string(v + 1) + " is not in the graph");
      if (seen[v]++) throw Error(ErrorCode::NotPartition, "vertex " + std::to_string(v + 1) + " is listed twice");
    }
  for (Vertex v = 0; v < n; ++v)
    if (!seen[v]) throw Error(ErrorCode::NotPartition, "vertex " + std::to_string(v + 1) + " is neither hidden nor observed");
  UpstreamPartition p;
  p.flag_.assign(n, false);
  for (Vertex h : hidden) p.flag_[h] = true;
  for (const Edge& e : g.edges())
    if (!p.flag_[e.tail] && p.flag_[e.head])
      throw Error(ErrorCode::DownstreamEdge, "edge " + std::to_string(e.tail + 1) + "->" + std::to_string(e.head + 1) +
                                                 " points from an observed to a hidden vertex");
  std::sort(hidden.begin(), hidden.end());
  std::sort(observed.begin(), observed.end());
  p.hidden_ = std::move(hidden);
  p.observed_ = std::move(observed);
  return p;
}

UpstreamPartition upstream_from_hidden(const DirectedGraph& g, std::vector<Vertex> hidden) {
  std::vector<bool> h(std::max(g.size(), 0), false);
  for (Vertex v : hidden)
    if (v >= 0 && v < g.size()) h[v] = true;
  std::vector<Vertex> observed;
  for (Vertex v = 0; v < g.size(); ++v)
    if (!h[v]) observed.push_back(v);
  return validate_upstream(g, std::move(hidden), std::move(observed));
}

std::vector<UpstreamPartition> all_upstream_partitions(const DirectedGraph& g) {
  const int n = g.size();
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "too many vertices to enumerate partitions");
  std::vector<UpstreamPartition> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool closed = std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
      return !((mask >> e.head) & 1u) || ((mask >> e.tail) & 1u);
    });
    if (!closed) continue;
    std::vector<Vertex> h, o;
    for (Vertex v = 0; v < n; ++v) ((mask >> v) & 1u ? h : o).push_back(v);
    out.push_back(validate_upstream(g, std::move(h), std::move(o)));
  }
  return out;
}

MultiDegree variable_multidegree(const MomentVariable& v, const UpstreamPartition& part) {
  int observed = 0;
  for (Vertex i : v.indices()) observed += part.is_observed(i);
  return {1, (v.is_cov() ? 1 : 0) + observed};
}

MultiDegree monomial_multidegree(const Monomial& m, const UpstreamPartition& part) {
  MultiDegree d;
  for (const MomentVariable& v : m.variables()) d += variable_multidegree(v, part);
  return d;
}

bool check_homogeneous(const Binomial& f, const UpstreamPartition& part) {
  return monomial_multidegree(f.lhs(), part) == monomial_multidegree(f.rhs(), part);
}

MultiDegree a_degree(Vertex v, const UpstreamPartition& part) { return part.is_hidden(v) ? MultiDegree{1, 1} : MultiDegree{1, 3}; }

MultiDegree b_degree(Vertex v, const UpstreamPartition& part) { return part.is_hidden(v) ? MultiDegree{1, 0} : MultiDegree{1, 3}; }

MultiDegree lambda_degree(const Edge& e, const UpstreamPartition& part) {
  return part.is_hidden(e.tail) && part.is_observed(e.head) ? MultiDegree{0, 1} : MultiDegree{0, 0};
}

GeneratorSet observed_generators(const DirectedGraph& g, const UpstreamPartition& part) {
  TrekTable table(g);
  GeneratorSet gens;
  gens.n = g.size();
  if (!part.hidden().empty()) gens.linear_source = "no-trek, observed indices only";
  auto all_observed = [&](std::span<const Vertex> idx) {
    return std::all_of(idx.begin(), idx.end(), [&](Vertex v) { return part.is_observed(v); });
  };
  for (const MomentVariable& v : linear_generators(table))
    if (all_observed(v.indices())) gens.linear.push_back(v);
  std::map<Binomial, std::size_t> seen;
  const auto& obs = part.observed();
  for (std::size_t a = 0; a < obs.size(); ++a)
    for (std::size_t b = a + 1; b < obs.size(); ++b) {
      if (!table.top(obs[a], obs[b])) continue;
      TrekMatrix m = trek_matrix(table, obs[a], obs[b]);
      std::erase_if(m.columns, [&](const ColumnLabel& c) { return !all_observed(c.indices()); });
      add_minors(gens, seen, m);
    }
  return gens;
}

template <class Scalar>
MomentData<Scalar> observed_marginal(const MomentData<Scalar>& m, const UpstreamPartition& part) {
  MomentData<Scalar> out(m.size());
  const auto& obs = part.observed();
  for (std::size_t a = 0; a < obs.size(); ++a)
    for (std::size_t b = a; b < obs.size(); ++b) {
      out.cov.at(obs[a], obs[b]) = m.cov.at(obs[a], obs[b]);
      for (std::size_t c = b; c < obs.size(); ++c)
        out.third.at(obs[a], obs[b], obs[c]) = m.third.at(obs[a], obs[b], obs[c]);
    }
  return out;
}

template MomentData<Rational> observed_marginal(const MomentData<Rational>&, const UpstreamPartition&);
template MomentData<double> observed_marginal(const MomentData<double>&, const UpstreamPartition&);

}  // namespace treksem
