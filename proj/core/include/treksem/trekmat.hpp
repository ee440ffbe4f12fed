#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/scalar.hpp"
#include "treksem/variables.hpp"

namespace treksem {

/// The unique simple trek (if any) of every moment variable of a polytree or
/// polyforest, computed once.  Throws NotPolytree.
class TrekTable {
 public:
  explicit TrekTable(const DirectedGraph& g);

  const DirectedGraph& graph() const noexcept { return g_; }
  int size() const noexcept { return g_.size(); }
  const VariableIndex& variables() const noexcept { return index_; }

  const std::optional<Trek>& trek(const MomentVariable& v) const { return treks_[index_.index(v)]; }
  bool has_trek(const MomentVariable& v) const { return trek(v).has_value(); }
  std::optional<Vertex> top(const MomentVariable& v) const;
  std::optional<Vertex> top(Vertex i, Vertex j) const { return top(MomentVariable::cov(i, j)); }
  std::optional<Vertex> top(Vertex i, Vertex j, Vertex k) const { return top(MomentVariable::third(i, j, k)); }

 private:
  DirectedGraph g_;
  VariableIndex index_;
  std::vector<std::optional<Trek>> treks_;
};

/// Graph-aware variable order: covariances first, then lower top, then the
/// trek paths (each a node sequence, the list sorted) compared
/// lexicographically.  Throws NoTrek when either variable has no trek.
std::strong_ordering compare_vars(const MomentVariable& u, const MomentVariable& v, const TrekTable& table);

/// Every s_ij without a 2-trek and every t_ijk without a 3-trek, in natural
/// order.  Throws NotPolytree.
std::vector<MomentVariable> linear_generators(const DirectedGraph& g);
std::vector<MomentVariable> linear_generators(const TrekTable& table);

/// Column of a trek matrix: a single vertex k or a pair (l, m) with l <= m.
/// Vertex columns sort before pair columns.
struct ColumnLabel {
  int arity = 1;
  Vertex l = 0;
  Vertex m = 0;

  static ColumnLabel vertex(Vertex k) { return {1, k, 0}; }
  static ColumnLabel pair(Vertex a, Vertex b) { return {2, std::min(a, b), std::max(a, b)}; }
  /// From a sorted multiset of 1 or 2 vertices.
  static ColumnLabel from_indices(std::span<const Vertex> idx);

  std::vector<Vertex> indices() const { return arity == 1 ? std::vector<Vertex>{l} : std::vector<Vertex>{l, m}; }

  friend auto operator<=>(const ColumnLabel&, const ColumnLabel&) = default;
};

/// "4" or "23" with 1-based labels ("(10)" / "(1,10)" when n > 9).
std::string column_name(const ColumnLabel& c, int n);

/// Moment variable obtained by appending a row vertex to a column label.
MomentVariable combine(Vertex row, const ColumnLabel& col);

/// Two-row matrix with rows i < j whose columns are the labels c with
/// top(i + c) = top(j + c), both defined.
struct TrekMatrix {
  Vertex i = 0;
  Vertex j = 0;
  std::vector<ColumnLabel> columns;

  Vertex row_vertex(int r) const { return r == 0 ? i : j; }
  MomentVariable entry(int r, std::size_t col) const { return combine(row_vertex(r), columns[col]); }
};

/// Throws NoTrek when i and j have no 2-trek, InvalidArgument when i == j.
TrekMatrix trek_matrix(const TrekTable& table, Vertex i, Vertex j);
TrekMatrix trek_matrix(const DirectedGraph& g, Vertex i, Vertex j);

/// Where a quadric came from: the columns (c, d) of A_{i,j}.
struct QuadricSource {
  Vertex i = 0;
  Vertex j = 0;
  ColumnLabel c;
  ColumnLabel d;

  friend bool operator==(const QuadricSource&, const QuadricSource&) = default;
};

struct Quadric {
  Binomial binomial;
  QuadricSource source;

  friend bool operator==(const Quadric&, const Quadric&) = default;
};

/// One binomial per unordered column pair.
std::vector<Quadric> two_minors(const TrekMatrix& m);

struct GeneratorSet {
  int n = 0;
  std::vector<MomentVariable> linear;
  std::vector<Quadric> quadrics;
  /// Describes where the linear part comes from; shown in the emitted output.
  std::string linear_source = "no-trek";

  friend bool operator==(const GeneratorSet&, const GeneratorSet&) = default;
};

/// Appends the minors of m that are not already present (by binomial).
void add_minors(GeneratorSet& gens, std::map<Binomial, std::size_t>& seen, const TrekMatrix& m);

/// Linear generators and the minors of A_{tail,head} for every edge.
GeneratorSet edge_generator_set(const DirectedGraph& g);
/// Linear generators and the minors of A_{i,j} for every pair with a 2-trek.
GeneratorSet full_generator_set(const DirectedGraph& g);

/// Incremental row echelon form over the rationals for sparse vectors.
class SpanBasis {
 public:
  using Vector = std::vector<std::pair<std::size_t, Rational>>;  // sorted by coordinate, no zeros

  /// Adds v; returns true when the rank grew.
  bool insert(Vector v);
  bool contains(Vector v) const;
  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  Vector reduce(Vector v) const;
  std::map<std::size_t, Vector> rows_;  // pivot coordinate -> row with leading coefficient 1
};

/// Coordinates for degree-2 monomials, assigned on first sight.
class MonomialCoordinates {
 public:
  std::size_t id(const Monomial& m);
  std::optional<std::size_t> find(const Monomial& m) const;
  SpanBasis::Vector vector(const Binomial& b);

 private:
  std::map<Monomial, std::size_t> ids_;
};

/// Exact rank of the quadrics as vectors in the space of quadratic forms.
std::size_t degree2_span_rank(const GeneratorSet& gens);
std::size_t degree2_span_rank(const std::vector<Binomial>& quadrics);

enum class DecompositionStatus {
  Decomposed,
  NotInIdeal,           // trek-rule images differ
  ViaLinearGenerators,  // both monomials contain a variable without a trek
  NoShortDecomposition  // images agree but no chain of at most two minors found
};

std::string_view to_string(DecompositionStatus s);

/// One step from -> to, equal to +/- a 2-minor of the source matrix.
struct MinorStep {
  Monomial from;
  Monomial to;
  QuadricSource source;
};

struct Decomposition {
  DecompositionStatus status = DecompositionStatus::NotInIdeal;
  std::vector<MinorStep> steps;  // steps telescope: lhs -> ... -> rhs
};

/// Writes f = lhs - rhs as a sum of at most two trek-matrix minors.  Throws
/// InvalidArgument when f is not quadratic.
Decomposition decompose_binomial(const TrekTable& table, const Binomial& f);

/// Exponent vector of the trek-rule image of a monomial: counts of a_v, b_v
/// and lambda_e.  nullopt when some factor has no trek (image zero).
std::optional<std::vector<int>> image_exponents(const TrekTable& table, const Monomial& m);

enum class EmitFormat { Plain, Macaulay2, Json };

/// Throws InvalidArgument for unknown names.
EmitFormat parse_emit_format(std::string_view name);

std::string emit(const GeneratorSet& gens, EmitFormat format);

/// Inverse of emit(gens, Json).  Throws ParseError.
GeneratorSet parse_generator_set(std::string_view json_text);

}  // namespace treksem
