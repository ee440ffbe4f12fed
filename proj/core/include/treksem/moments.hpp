#pragma once

#include <cstdint>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/linalg.hpp"
#include "treksem/scalar.hpp"
#include "treksem/variables.hpp"

namespace treksem {

/// Symmetric n x n matrix, packed lower triangle.
template <class Scalar>
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * (n + 1) / 2, ScalarTraits<Scalar>::zero()) {}

  int size() const noexcept { return n_; }
  Scalar& at(Vertex i, Vertex j) { return data_[slot(i, j)]; }
  const Scalar& at(Vertex i, Vertex j) const { return data_[slot(i, j)]; }
  Matrix<Scalar> dense() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  static std::size_t slot(Vertex i, Vertex j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(j) * (j + 1) / 2 + i;
  }
  int n_ = 0;
  std::vector<Scalar> data_;
};

/// Fully symmetric n x n x n tensor; only sorted index triples are stored.
template <class Scalar>
class SymTensor3 {
 public:
  SymTensor3() = default;
  explicit SymTensor3(int n)
      : n_(n), data_(static_cast<std::size_t>(n) * (n + 1) * (n + 2) / 6, ScalarTraits<Scalar>::zero()) {}

  int size() const noexcept { return n_; }
  Scalar& at(Vertex i, Vertex j, Vertex k) { return data_[slot(i, j, k)]; }
  const Scalar& at(Vertex i, Vertex j, Vertex k) const { return data_[slot(i, j, k)]; }

  friend bool operator==(const SymTensor3&, const SymTensor3&) = default;

 private:
  static std::size_t slot(Vertex i, Vertex j, Vertex k) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    auto kk = static_cast<std::size_t>(k), jj = static_cast<std::size_t>(j);
    return kk * (kk + 1) * (kk + 2) / 6 + jj * (jj + 1) / 2 + static_cast<std::size_t>(i);
  }
  int n_ = 0;
  std::vector<Scalar> data_;
};

/// Covariance matrix S and third-moment tensor T.
template <class Scalar>
struct MomentData {
  SymMatrix<Scalar> cov;
  SymTensor3<Scalar> third;

  MomentData() = default;
  explicit MomentData(int n) : cov(n), third(n) {}

  int size() const noexcept { return cov.size(); }
  const Scalar& value(const MomentVariable& v) const {
    return v.is_cov() ? cov.at(v[0], v[1]) : third.at(v[0], v[1], v[2]);
  }
  Scalar& value(const MomentVariable& v) { return v.is_cov() ? cov.at(v[0], v[1]) : third.at(v[0], v[1], v[2]); }
  /// Largest absolute entry of S and T.
  double max_abs() const;

  friend bool operator==(const MomentData&, const MomentData&) = default;
};

/// Edge weights (indexed like the graph's edge list) and error moments.
template <class Scalar>
struct ModelParameters {
  std::vector<Scalar> lambda;
  std::vector<Scalar> omega2;
  std::vector<Scalar> omega3;

  friend bool operator==(const ModelParameters&, const ModelParameters&) = default;
};

/// Parameters of the simple trek parametrisation: a_i, b_i and the edge weights.
template <class Scalar>
struct SimpleTrekParams {
  std::vector<Scalar> a;
  std::vector<Scalar> b;
  std::vector<Scalar> lambda;

  friend bool operator==(const SimpleTrekParams&, const SimpleTrekParams&) = default;
};

/// Weighted adjacency matrix Lambda with Lambda(tail, head) = lambda_e.
template <class Scalar>
Matrix<Scalar> lambda_matrix(const DirectedGraph& g, const std::vector<Scalar>& lambda);

/// (I - Lambda)^{-1}.  Back-substitution along a topological order when g is
/// acyclic, Gauss-Jordan otherwise.  Throws SingularSystem.
template <class Scalar>
Matrix<Scalar> transfer_matrix(const DirectedGraph& g, const std::vector<Scalar>& lambda);

/// T . A . A . A, i.e. t'_{ijk} = sum_{abc} t_{abc} A_{ai} A_{bj} A_{ck}.
template <class Scalar>
SymTensor3<Scalar> tucker(const SymTensor3<Scalar>& t, const Matrix<Scalar>& a);

/// A^T S A.
template <class Scalar>
SymMatrix<Scalar> congruence(const SymMatrix<Scalar>& s, const Matrix<Scalar>& a);

/// S = B^T diag(omega2) B, T = diag(omega3) . B . B . B with B = (I - Lambda)^{-1}.
/// Throws ShapeMismatch on parameter vectors of the wrong length and
/// SingularSystem when I - Lambda is not invertible.
template <class Scalar>
MomentData<Scalar> forward_moments(const DirectedGraph& g, const ModelParameters<Scalar>& p);

/// The same moments through the structural recursion X_r = sum lambda_lr X_l +
/// eps_r, visiting vertices in topological order.  Throws CyclicGraph.
template <class Scalar>
MomentData<Scalar> recursive_moments(const DirectedGraph& g, const ModelParameters<Scalar>& p);

/// a_i = s_ii and b_i = t_iii obtained from the parent sums of the
/// recursion; lambda copied through.  Throws CyclicGraph.
template <class Scalar>
SimpleTrekParams<Scalar> params_to_ab(const DirectedGraph& g, const ModelParameters<Scalar>& p);

/// One monomial a_top * prod lambda (or b_top * ...) of a trek-rule image.
struct TrekTerm {
  Vertex top = 0;
  std::vector<std::pair<std::size_t, int>> edge_powers;  // (edge index, exponent), ascending
  long coefficient = 1;  // number of simple treks collapsing onto the monomial

  friend bool operator==(const TrekTerm&, const TrekTerm&) = default;
  friend auto operator<=>(const TrekTerm&, const TrekTerm&) = default;
};

/// Trek-rule image of every moment variable of an acyclic graph, with
/// identical monomials collected.  Throws CyclicGraph.
class TrekExpansion {
 public:
  explicit TrekExpansion(const DirectedGraph& g);

  const DirectedGraph& graph() const noexcept { return g_; }
  const std::vector<TrekTerm>& terms(const MomentVariable& v) const { return terms_[index_.index(v)]; }

  template <class Scalar>
  MomentData<Scalar> evaluate(const SimpleTrekParams<Scalar>& q) const;

 private:
  DirectedGraph g_;
  VariableIndex index_;
  std::vector<std::vector<TrekTerm>> terms_;
};

/// s_ij = sum over simple 2-treks of a_top * prod lambda, t_ijk likewise with b.
template <class Scalar>
MomentData<Scalar> trek_rule_moments(const DirectedGraph& g, const SimpleTrekParams<Scalar>& q);

struct SampleConfig {
  /// Draws are p/q with |p| <= max_numerator and 1 <= q <= max_denominator.
  long max_numerator = 5;
  long max_denominator = 4;
  bool allow_zero_lambda = true;
  bool allow_zero_omega3 = true;
  /// Redraw limit for cyclic graphs whose I - Lambda comes out singular.
  int max_redraws = 1000;
};

/// Deterministic draw of model parameters from the seed.  omega2 is always
/// strictly positive.  The double instantiation converts the exact draw, so
/// both scalar kinds see the same model for a given seed.  Throws
/// SingularSystem only if every redraw failed.
template <class Scalar>
ModelParameters<Scalar> sample_params(const DirectedGraph& g, std::uint64_t seed, const SampleConfig& config = {});

/// Marginal on the given (sorted) vertices, relabelled 0..|keep|-1.
template <class Scalar>
MomentData<Scalar> marginal(const MomentData<Scalar>& m, const std::vector<Vertex>& keep);

/// Convert an exact instance to floating point.
MomentData<double> to_float(const MomentData<Rational>& m);
ModelParameters<double> to_float(const ModelParameters<Rational>& p);

}  // namespace treksem
