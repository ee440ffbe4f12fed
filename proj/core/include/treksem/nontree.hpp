#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/linalg.hpp"
#include "treksem/moments.hpp"

namespace treksem {

/// Rows are labelled by the empty set or one vertex, columns by one vertex or
/// a pair; entry (r, c) is the moment whose index multiset is r + c.
struct MatrixSpec {
  std::vector<std::vector<Vertex>> rows;
  std::vector<std::vector<Vertex>> cols;

  friend bool operator==(const MatrixSpec&, const MatrixSpec&) = default;
};

/// Throws BadLabels unless every row has 0 or 1 vertices, every column 1 or 2,
/// all vertices are in [0, n) and every combination has 2 or 3 indices.
void validate_spec(const MatrixSpec& spec, int n);

MomentVariable spec_entry(const MatrixSpec& spec, std::size_t r, std::size_t c);

/// Symbolic entries as variable names, for display.
std::vector<std::vector<std::string>> symbolic_matrix(const MatrixSpec& spec, int n);

/// Throws BadLabels.
template <class Scalar>
Matrix<Scalar> build_matrix(const MatrixSpec& spec, const MomentData<Scalar>& m);

/// Rational combination of monomials with distinct monomials and nonzero
/// coefficients.
class MomentPolynomial {
 public:
  MomentPolynomial() = default;
  /// Collects repeated monomials and drops zero coefficients.
  explicit MomentPolynomial(std::vector<std::pair<Rational, Monomial>> terms);

  const std::vector<std::pair<Rational, Monomial>>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

 private:
  std::vector<std::pair<Rational, Monomial>> terms_;
};

std::string polynomial_name(const MomentPolynomial& f, int n);

template <class Scalar>
Scalar evaluate_polynomial(const MomentPolynomial& f, const MomentData<Scalar>& m);

/// Expansion of the determinant of a square spec as a polynomial.
MomentPolynomial determinant_polynomial(const MatrixSpec& spec);

/// A relation shipped with the library: graph, optional hidden vertices,
/// matrix and the minor size whose minors are expected to vanish.
struct Builtin {
  std::string name;
  std::string description;
  DirectedGraph graph;
  std::vector<Vertex> hidden;
  MatrixSpec spec;
  int minor_size = 0;
};

const std::vector<Builtin>& builtins();
/// Throws InvalidArgument for unknown names.
const Builtin& builtin(std::string_view name);

/// The cubic of the triangle graph exactly as printed, with t_223 cubed.
MomentPolynomial triangle_f_printed();
/// The same expression with t_223 squared, i.e. the 3 x 3 determinant reading.
MomentPolynomial triangle_f_squared();

struct MinorResidual {
  std::vector<std::size_t> rows;  // 0-based positions in the spec
  std::vector<std::size_t> cols;
  double max_relative_residual = 0.0;
  bool vanishes = true;  // exact: zero on every trial; float: residual within tolerance
};

struct VanishingReport {
  std::size_t trials = 0;
  int minor_size = 0;
  std::vector<MinorResidual> minors;

  std::size_t vanishing_count() const;
  bool all_vanish() const { return vanishing_count() == minors.size(); }
};

struct VanishingOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  SampleConfig sampling{};
};

/// Samples models on g (cyclic allowed), computes moments (zeroing entries
/// with hidden indices) and evaluates every r x r minor of the spec matrix.
/// Relative residual: |minor| / (1 + max |term of the Leibniz expansion|).
/// Throws BadLabels, InvalidArgument (r too large), SingularSystem.
template <class Scalar>
VanishingReport minor_vanishing_report(const DirectedGraph& g, const std::vector<Vertex>& hidden,
                                       const MatrixSpec& spec, int r, const VanishingOptions& options);

struct PolynomialReport {
  std::size_t trials = 0;
  double max_relative_residual = 0.0;
  bool vanishes = true;
};

/// Same sampling as minor_vanishing_report, evaluating one polynomial.
/// Relative residual: |f| / (1 + max |term|).
template <class Scalar>
PolynomialReport polynomial_vanishing_report(const DirectedGraph& g, const std::vector<Vertex>& hidden,
                                             const MomentPolynomial& f, const VanishingOptions& options);

}  // namespace treksem
