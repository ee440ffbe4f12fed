#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "treksem/graph.hpp"

namespace treksem {

/// Symbolic moment coordinate: a covariance s_ij (two indices) or a third
/// moment t_ijk (three indices).  Indices are kept sorted ascending.
class MomentVariable {
 public:
  MomentVariable() = default;

  static MomentVariable cov(Vertex i, Vertex j);
  static MomentVariable third(Vertex i, Vertex j, Vertex k);
  /// Builds s or t from 2 or 3 indices in any order.
  static MomentVariable from_indices(std::span<const Vertex> indices);

  bool is_cov() const noexcept { return order_ == 2; }
  bool is_third() const noexcept { return order_ == 3; }
  int order() const noexcept { return order_; }
  std::span<const Vertex> indices() const noexcept { return {idx_.data(), static_cast<std::size_t>(order_)}; }
  Vertex operator[](int r) const { return idx_[r]; }
  Vertex max_index() const noexcept { return idx_[order_ - 1]; }

  /// Natural order: covariances first, then indices lexicographically.
  friend auto operator<=>(const MomentVariable&, const MomentVariable&) = default;

 private:
  int order_ = 2;  // first member so the defaulted ordering puts s before t
  std::array<Vertex, 3> idx_{0, 0, 0};
};

/// Name with 1-based indices: "s_12", "t_113"; when any index exceeds 9 the
/// parenthesised form "s_(1,10)" is used.
std::string variable_name(const MomentVariable& v, int n);

/// Dense numbering of all variables for n vertices: every s_ij (i <= j)
/// first, then every t_ijk (i <= j <= k), both in natural order.
class VariableIndex {
 public:
  explicit VariableIndex(int n);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return vars_.size(); }
  std::size_t num_cov() const noexcept { return num_cov_; }
  std::size_t index(const MomentVariable& v) const;
  const MomentVariable& variable(std::size_t id) const { return vars_[id]; }
  const std::vector<MomentVariable>& all() const noexcept { return vars_; }

 private:
  int n_;
  std::size_t num_cov_;
  std::vector<MomentVariable> vars_;
};

/// Commutative monomial in moment variables, stored as a sorted multiset.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<MomentVariable> vars);
  Monomial(std::initializer_list<MomentVariable> vars) : Monomial(std::vector<MomentVariable>(vars)) {}

  std::size_t degree() const noexcept { return vars_.size(); }
  const std::vector<MomentVariable>& variables() const noexcept { return vars_; }

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Degree first; within a degree the sorted variable sequences compare
  /// lexicographically.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

 private:
  std::vector<MomentVariable> vars_;
};

/// "s_12*t_111", with repeated factors written as powers ("t_112^2").
std::string monomial_name(const Monomial& m, int n);

/// lhs - rhs with lhs > rhs, so each relation has exactly one stored form.
class Binomial {
 public:
  /// Orients the pair; throws InvalidArgument when the monomials coincide.
  Binomial(Monomial a, Monomial b);

  const Monomial& lhs() const noexcept { return lhs_; }
  const Monomial& rhs() const noexcept { return rhs_; }
  std::size_t degree() const noexcept { return lhs_.degree(); }

  friend bool operator==(const Binomial&, const Binomial&) = default;
  friend auto operator<=>(const Binomial&, const Binomial&) = default;

 private:
  Monomial lhs_;
  Monomial rhs_;
};

std::string binomial_name(const Binomial& b, int n);

}  // namespace treksem
