#include "treksem/variables.hpp"

#include <algorithm>

#include "treksem/error.hpp"

namespace treksem {

MomentVariable MomentVariable::cov(Vertex i, Vertex j) {
  MomentVariable v;
  v.order_ = 2;
  v.idx_ = {std::min(i, j), std::max(i, j), 0};
  return v;
}

MomentVariable MomentVariable::third(Vertex i, Vertex j, Vertex k) {
  MomentVariable v;
  v.order_ = 3;
  v.idx_ = {i, j, k};
  std::sort(v.idx_.begin(), v.idx_.end());
  return v;
}

MomentVariable MomentVariable::from_indices(std::span<const Vertex> indices) {
  if (indices.size() == 2) return cov(indices[0], indices[1]);
  if (indices.size() == 3) return third(indices[0], indices[1], indices[2]);
  throw Error(ErrorCode::InvalidArgument, "a moment variable has 2 or 3 indices");
}

std::string variable_name(const MomentVariable& v, int n) {
  std::string out = v.is_cov() ? "s_" : "t_";
  if (n <= 9) {
    for (Vertex i : v.indices()) out += std::to_string(i + 1);
    return out;
  }
  out += '(';
  for (int r = 0; r < v.order(); ++r) {
    if (r) out += ',';
    out += std::to_string(v[r] + 1);
  }
  return out + ')';
}

VariableIndex::VariableIndex(int n) : n_(n) {
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j) vars_.push_back(MomentVariable::cov(i, j));
  num_cov_ = vars_.size();
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j)
      for (Vertex k = j; k < n; ++k) vars_.push_back(MomentVariable::third(i, j, k));
}

std::size_t VariableIndex::index(const MomentVariable& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  return static_cast<std::size_t>(it - vars_.begin());
}

Monomial::Monomial(std::vector<MomentVariable> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<MomentVariable> vars = vars_;
  vars.insert(vars.end(), other.vars_.begin(), other.vars_.end());
  return Monomial(std::move(vars));
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.vars_.begin(), a.vars_.end(), b.vars_.begin(),
                                                b.vars_.end());
}

std::string monomial_name(const Monomial& m, int n) {
  if (m.degree() == 0) return "1";
  std::string out;
  const auto& vars = m.variables();
  for (std::size_t i = 0; i < vars.size();) {
    std::size_t j = i;
    while (j < vars.size() && vars[j] == vars[i]) ++j;
    if (!out.empty()) out += '*';
    out += variable_name(vars[i], n);
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

Binomial::Binomial(Monomial a, Monomial b) {
  if (a == b) throw Error(ErrorCode::InvalidArgument, "binomial with identical monomials is zero");
  if (a > b) {
    lhs_ = std::move(a);
    rhs_ = std::move(b);
  } else {
    lhs_ = std::move(b);
    rhs_ = std::move(a);
  }
}

std::string binomial_name(const Binomial& b, int n) {
  return monomial_name(b.lhs(), n) + " - " + monomial_name(b.rhs(), n);
}

}  // namespace treksem
