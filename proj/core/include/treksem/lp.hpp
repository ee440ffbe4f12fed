#pragma once

#include <cstddef>
#include <vector>

#include "treksem/scalar.hpp"

namespace treksem {

enum class Relation { GreaterEqual, Equal };

/// coeffs . x (>= | =) rhs
struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::GreaterEqual;
  Rational rhs;
};

struct LpSolution {
  Rational optimum;
  std::vector<Rational> argmax;
};

/// Exact two-phase simplex with Bland's rule.  Constraints of the form
/// x_j >= 0 become bounds; variables without one are split into two
/// nonnegative parts.  Phase one runs once at construction, so repeated
/// objectives over the same feasible region only pay for phase two.
class ExactSimplex {
 public:
  /// Throws DimensionMismatch on a coefficient vector of the wrong length and
  /// Infeasible when the region is empty.
  ExactSimplex(std::size_t dim, const std::vector<LinearConstraint>& constraints);

  /// Throws DimensionMismatch and Unbounded.
  LpSolution maximize(const std::vector<Rational>& objective) const;

  std::size_t dim() const noexcept { return dim_; }

 private:
  using Row = std::vector<Rational>;

  void pivot(std::vector<Row>& rows, Row& obj, std::vector<std::size_t>& basis, std::size_t r, std::size_t c) const;
  // Runs simplex iterations on obj over columns [0, limit); false when unbounded.
  bool optimize(std::vector<Row>& rows, Row& obj, std::vector<std::size_t>& basis, std::size_t limit) const;

  std::size_t dim_;
  std::size_t num_cols_ = 0;              // structural + slack columns (artificials dropped)
  std::vector<long> pos_col_, neg_col_;   // column of x_j's positive / negative part, -1 if none
  std::vector<Row> rows_;                 // feasible tableau after phase one, last entry = rhs
  std::vector<std::size_t> basis_;
};

}  // namespace treksem
