#include "treksem/lp.hpp"

#include <optional>
#include <string>

#include "treksem/error.hpp"

namespace treksem {

namespace {

bool is_bound(const LinearConstraint& c, std::size_t& var) {
  if (c.relation != Relation::GreaterEqual || sgn(c.rhs) != 0) return false;
  std::optional<std::size_t> only;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
    if (sgn(c.coeffs[j]) == 0) continue;
    if (only || sgn(c.coeffs[j]) < 0) return false;
    only = j;
  }
  if (!only) return false;
  var = *only;
  return true;
}

}  // namespace

ExactSimplex::ExactSimplex(std::size_t dim, const std::vector<LinearConstraint>& constraints) : dim_(dim) {
  for (const auto& c : constraints)
    if (c.coeffs.size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "constraint has " + std::to_string(c.coeffs.size()) +
                                                    " coefficients, expected " + std::to_string(dim));
  std::vector<bool> bounded(dim, false);
  std::vector<const LinearConstraint*> general;
  for (const auto& c : constraints) {
    std::size_t var = 0;
    if (is_bound(c, var))
      bounded[var] = true;
    else
      general.push_back(&c);
  }
  pos_col_.assign(dim, -1);
  neg_col_.assign(dim, -1);
  long next = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    pos_col_[j] = next++;
    if (!bounded[j]) neg_col_[j] = next++;
  }
  const std::size_t structural = static_cast<std::size_t>(next);
  std::size_t slacks = 0;
  for (const auto* c : general) slacks += c->relation == Relation::GreaterEqual;
  num_cols_ = structural + slacks;

  // Orient every row so its rhs is nonnegative; a row whose slack then has
  // coefficient +1 starts with the slack basic, the others get an artificial.
  const std::size_t m = general.size();
  std::vector<Row> rows(m, Row(num_cols_ + 1, Rational(0)));
  std::vector<std::optional<std::size_t>> start(m);
  std::size_t slack = structural;
  for (std::size_t r = 0; r < m; ++r) {
    const LinearConstraint& c = *general[r];
    Row& row = rows[r];
    for (std::size_t j = 0; j < dim; ++j) {
      row[pos_col_[j]] = c.coeffs[j];
      if (neg_col_[j] >= 0) row[neg_col_[j]] = -c.coeffs[j];
    }
    row[num_cols_] = c.rhs;
    bool flip = sgn(c.rhs) < 0;
    if (c.relation == Relation::GreaterEqual) {
      row[slack] = -1;
      if (sgn(c.rhs) == 0) flip = true;
      if (flip) start[r] = slack;
      ++slack;
    }
    if (flip)
      for (auto& x : row) x = -x;
  }

  std::size_t artificials = 0;
  for (const auto& s : start) artificials += !s;
  const std::size_t width = num_cols_ + artificials;
  for (Row& row : rows) {
    Rational rhs = row.back();
    row.resize(width + 1, Rational(0));
    row[num_cols_] = 0;
    row[width] = rhs;
  }
  std::vector<std::size_t> basis(m);
  Row obj(width + 1, Rational(0));
  std::size_t art = num_cols_;
  for (std::size_t r = 0; r < m; ++r) {
    if (start[r]) {
      basis[r] = *start[r];
      continue;
    }
    rows[r][art] = 1;
    basis[r] = art;
    obj[art] = -1;
    for (std::size_t k = 0; k <= width; ++k) obj[k] += rows[r][k];
    ++art;
  }
  if (artificials > 0) {
    optimize(rows, obj, basis, width);
    if (sgn(obj[width]) != 0) throw Error(ErrorCode::Infeasible, "the constraint system has no solution");
    // Move zero-level artificials out of the basis or drop redundant rows.
    for (std::size_t r = 0; r < rows.size();) {
      if (basis[r] < num_cols_) {
        ++r;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t k = 0; k < num_cols_ && !col; ++k)
        if (sgn(rows[r][k]) != 0) col = k;
      if (col) {
        pivot(rows, obj, basis, r, *col);
        ++r;
      } else {
        rows.erase(rows.begin() + static_cast<long>(r));
        basis.erase(basis.begin() + static_cast<long>(r));
      }
    }
  }
  for (Row& row : rows) {
    Rational rhs = row.back();
    row.resize(num_cols_ + 1);
    row[num_cols_] = rhs;
  }
  rows_ = std::move(rows);
  basis_ = std::move(basis);
}

void ExactSimplex::pivot(std::vector<Row>& rows, Row& obj, std::vector<std::size_t>& basis, std::size_t r,
                         std::size_t c) const {
  Row& pr = rows[r];
  Rational p = pr[c];
  for (auto& x : pr) x /= p;
  auto eliminate = [&](Row& row) {
    if (sgn(row[c]) == 0) return;
    Rational f = row[c];
    for (std::size_t k = 0; k < row.size(); ++k)
      if (sgn(pr[k]) != 0) row[k] -= f * pr[k];
  };
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (i != r) eliminate(rows[i]);
  eliminate(obj);
  basis[r] = c;
}

bool ExactSimplex::optimize(std::vector<Row>& rows, Row& obj, std::vector<std::size_t>& basis,
                            std::size_t limit) const {
  for (;;) {
    std::optional<std::size_t> enter;
    for (std::size_t k = 0; k < limit && !enter; ++k)
      if (sgn(obj[k]) > 0) enter = k;
    if (!enter) return true;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (sgn(rows[r][*enter]) <= 0) continue;
      Rational ratio = rows[r].back() / rows[r][*enter];
      if (!leave || ratio < best || (ratio == best && basis[r] < basis[*leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (!leave) return false;
    pivot(rows, obj, basis, *leave, *enter);
  }
}

LpSolution ExactSimplex::maximize(const std::vector<Rational>& objective) const {
  if (objective.size() != dim_)
    throw Error(ErrorCode::DimensionMismatch, "objective has " + std::to_string(objective.size()) +
                                                  " coefficients, expected " + std::to_string(dim_));
  std::vector<Row> rows = rows_;
  std::vector<std::size_t> basis = basis_;
  Row obj(num_cols_ + 1, Rational(0));
  for (std::size_t j = 0; j < dim_; ++j) {
    obj[pos_col_[j]] = objective[j];
    if (neg_col_[j] >= 0) obj[neg_col_[j]] = -objective[j];
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Rational cb = obj[basis[r]];
    if (sgn(cb) == 0) continue;
    for (std::size_t k = 0; k <= num_cols_; ++k) obj[k] -= cb * rows[r][k];
  }
  if (!optimize(rows, obj, basis, num_cols_)) throw Error(ErrorCode::Unbounded, "objective is unbounded above");
  std::vector<Rational> value(num_cols_, Rational(0));
  for (std::size_t r = 0; r < rows.size(); ++r) value[basis[r]] = rows[r].back();
  LpSolution sol;
  sol.optimum = -obj.back();
  for (std::size_t j = 0; j < dim_; ++j) {
    Rational x = value[pos_col_[j]];
    if (neg_col_[j] >= 0) x -= value[neg_col_[j]];
    sol.argmax.push_back(x);
  }
  return sol;
}

}  // namespace treksem
