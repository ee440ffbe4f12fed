#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/lp.hpp"
#include "treksem/trekmat.hpp"

namespace treksem {

/// Exponents of b_top * prod lambda for t_ijk: z indexed by vertex, y by edge
/// (in the graph's edge order).
struct ExponentVector {
  std::array<Vertex, 3> sinks{};
  std::vector<int> z;
  std::vector<int> y;

  /// (z, y) concatenated as rationals.
  std::vector<Rational> point() const;

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
};

/// Throws NoTrek when i, j, k have no 3-trek and NotPolytree.
ExponentVector exponent_vector(const TrekTable& table, Vertex i, Vertex j, Vertex k);
ExponentVector exponent_vector(const DirectedGraph& g, Vertex i, Vertex j, Vertex k);

/// One point per sorted triple with a 3-trek.  Throws NotPolytree and
/// Disconnected (polyforests are not handled).
std::vector<ExponentVector> vertex_set(const DirectedGraph& g);

enum class ConstraintFamily { ZNonnegative, YNonnegative, ZSum, Edge, Vertex };

std::string_view to_string(ConstraintFamily f);

struct HConstraint {
  LinearConstraint constraint;
  ConstraintFamily family;
  int anchor = -1;  // vertex or edge index the constraint belongs to
};

struct HRep {
  int num_vertices = 0;
  std::size_t num_edges = 0;
  std::vector<HConstraint> constraints;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(num_vertices) + num_edges; }
  std::vector<LinearConstraint> linear() const;
};

/// z >= 0, y >= 0, sum z = 1, then per edge l -> m:
/// 2 z_l + sum_{h in pa(l)} y_hl - y_lm >= 0, and per vertex l:
/// 3 z_l + sum_{h in pa(l)} y_hl - sum_{m in ch(l)} y_lm >= 0.  Throws NotPolytree.
HRep h_rep(const DirectedGraph& g);

/// Text form such as "2z_1 - y_12 >= 0".
std::string format_constraint(const HConstraint& c, const DirectedGraph& g);

/// Throws DimensionMismatch.
bool point_in_h(const HRep& h, const std::vector<Rational>& point);

/// Exact maximum of objective over the H-polytope.  Throws Infeasible,
/// Unbounded, DimensionMismatch.
LpSolution lp_maximize(const HRep& h, const std::vector<Rational>& objective);

struct SupportDiscrepancy {
  std::vector<Rational> objective;
  Rational lp_optimum;
  Rational vertex_maximum;
  bool unbounded = false;  // the H side has no finite maximum
};

struct VhReport {
  std::size_t num_vertices = 0;
  std::vector<ExponentVector> outside_h;  // vertices violating the H-representation
  std::size_t trials = 0;
  std::vector<SupportDiscrepancy> discrepancies;

  bool ok() const noexcept { return outside_h.empty() && discrepancies.empty(); }
};

/// Checks V inside H exactly and compares the LP optimum with the best vertex
/// for every objective.
VhReport compare_vh(const HRep& h, const std::vector<ExponentVector>& vertices,
                    const std::vector<std::vector<Rational>>& objectives);

/// compare_vh on h_rep(g) and vertex_set(g) with `trials` objectives whose
/// entries are drawn uniformly from [-9, 9].
VhReport check_vh_equality(const DirectedGraph& g, std::size_t trials, std::uint64_t seed);

}  // namespace treksem
