#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treksem/graph.hpp"
#include "treksem/moments.hpp"
#include "treksem/trekmat.hpp"

namespace treksem {

enum class ViolationKind {
  NotPositiveDefinite,  // leading principal minor of S (1-based size in `minor`)
  OffDiagonalS,         // s'_ij != 0 for i != j
  OffDiagonalT,         // t'_ijk != 0 for indices not all equal
  NonPositiveError,     // s'_ii <= 0
  LinearGenerator,      // coordinate without a trek is nonzero
};

std::string_view to_string(ViolationKind k);

template <class Scalar>
struct Violation {
  ViolationKind kind;
  MomentVariable where;  // unused for NotPositiveDefinite
  Scalar value;
  std::size_t minor = 0;
};

template <class Scalar>
struct MembershipResult {
  bool inside = false;
  ModelParameters<Scalar> recovered;           // filled when inside
  std::vector<Violation<Scalar>> certificate;  // non-empty when outside
};

/// lambda_ij = s_ij / s_ii for every edge i -> j.  Throws NonPositiveDiagonal
/// when a tail has s_ii <= 0 and ShapeMismatch on a size mismatch.
template <class Scalar>
std::vector<Scalar> recover_lambda(const DirectedGraph& g, const SymMatrix<Scalar>& s);

/// Is m a point of the third-order moment model of the polytree g?  Recovers
/// Lambda, forms S' = (I-L)^T S (I-L) and T' = T.(I-L).(I-L).(I-L), and
/// requires S PD and S', T' diagonal.  In float mode an entry counts as zero
/// when |x| <= tolerance * (1 + max |moment|); exact mode ignores tolerance.
/// Throws NotPolytree, ShapeMismatch, NonPositiveDiagonal (any s_ii <= 0).
template <class Scalar>
MembershipResult<Scalar> decide_membership(const DirectedGraph& g, const MomentData<Scalar>& m,
                                           double tolerance = 1e-9);

template <class Scalar>
struct GeneratorResidual {
  Scalar max_abs_residual;
  std::optional<std::string> worst;  // name of the generator attaining it, if nonzero
};

/// Substitutes m into every generator.  Throws ShapeMismatch when the sizes differ.
template <class Scalar>
GeneratorResidual<Scalar> evaluate_generators(const GeneratorSet& gens, const MomentData<Scalar>& m);

/// Value of a monomial at m.
template <class Scalar>
Scalar evaluate_monomial(const Monomial& mono, const MomentData<Scalar>& m);

}  // namespace treksem
