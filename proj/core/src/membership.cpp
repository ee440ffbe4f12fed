#include "treksem/membership.hpp"

#include <cmath>

#include "treksem/error.hpp"

namespace treksem {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::NotPositiveDefinite: return "not-positive-definite";
    case ViolationKind::OffDiagonalS: return "off-diagonal-S'";
    case ViolationKind::OffDiagonalT: return "off-diagonal-T'";
    case ViolationKind::NonPositiveError: return "non-positive-error-variance";
    case ViolationKind::LinearGenerator: return "linear-generator";
  }
  return "unknown";
}

template <class Scalar>
std::vector<Scalar> recover_lambda(const DirectedGraph& g, const SymMatrix<Scalar>& s) {
  if (s.size() != g.size())
    throw Error(ErrorCode::ShapeMismatch, "moments have " + std::to_string(s.size()) + " vertices, graph has " +
                                              std::to_string(g.size()));
  std::vector<Scalar> lambda;
  for (const Edge& e : g.edges()) {
    if (ScalarTraits<Scalar>::sign(s.at(e.tail, e.tail)) <= 0)
      throw Error(ErrorCode::NonPositiveDiagonal, "s_" + std::to_string(e.tail + 1) + std::to_string(e.tail + 1) +
                                                      " is not positive");
    lambda.push_back(s.at(e.tail, e.head) / s.at(e.tail, e.tail));
  }
  return lambda;
}

template <class Scalar>
MembershipResult<Scalar> decide_membership(const DirectedGraph& g, const MomentData<Scalar>& m, double tolerance) {
  using T = ScalarTraits<Scalar>;
  require_forest(g);
  if (m.size() != g.size())
    throw Error(ErrorCode::ShapeMismatch, "moments have " + std::to_string(m.size()) + " vertices, graph has " +
                                              std::to_string(g.size()));
  const int n = g.size();
  for (Vertex i = 0; i < n; ++i)
    if (T::sign(m.cov.at(i, i)) <= 0)
      throw Error(ErrorCode::NonPositiveDiagonal,
                  "diagonal entry " + std::to_string(i + 1) + " of S is not positive");

  const double scale = T::kind == ScalarKind::Exact ? 0.0 : tolerance * (1.0 + m.max_abs());
  auto vanishes = [&](const Scalar& x) {
    if constexpr (T::kind == ScalarKind::Exact)
      return T::is_zero(x);
    else
      return std::fabs(x) <= scale;
  };

  MembershipResult<Scalar> result;
  auto& cert = result.certificate;
  if (auto k = positive_definite_failure(m.cov.dense()))
    cert.push_back({ViolationKind::NotPositiveDefinite, MomentVariable{}, T::zero(), *k});

  std::vector<Scalar> lambda = recover_lambda(g, m.cov);
  Matrix<Scalar> a = Matrix<Scalar>::identity(n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) a(g.edges()[e].tail, g.edges()[e].head) -= lambda[e];
  SymMatrix<Scalar> s2 = congruence(m.cov, a);
  SymTensor3<Scalar> t2 = tucker(m.third, a);

  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j) {
      if (i != j && !vanishes(s2.at(i, j)))
        cert.push_back({ViolationKind::OffDiagonalS, MomentVariable::cov(i, j), s2.at(i, j)});
      for (Vertex k = j; k < n; ++k)
        if (!(i == j && j == k) && !vanishes(t2.at(i, j, k)))
          cert.push_back({ViolationKind::OffDiagonalT, MomentVariable::third(i, j, k), t2.at(i, j, k)});
    }
  for (Vertex i = 0; i < n; ++i)
    if (T::sign(s2.at(i, i)) <= 0 || vanishes(s2.at(i, i)))
      cert.push_back({ViolationKind::NonPositiveError, MomentVariable::cov(i, i), s2.at(i, i)});
  for (const MomentVariable& v : linear_generators(g))
    if (!vanishes(m.value(v))) cert.push_back({ViolationKind::LinearGenerator, v, m.value(v)});

  if (!cert.empty()) return result;
  result.inside = true;
  result.recovered.lambda = std::move(lambda);
  for (Vertex i = 0; i < n; ++i) {
    result.recovered.omega2.push_back(s2.at(i, i));
    result.recovered.omega3.push_back(t2.at(i, i, i));
  }
  return result;
}

template <class Scalar>
Scalar evaluate_monomial(const Monomial& mono, const MomentData<Scalar>& m) {
  Scalar v = ScalarTraits<Scalar>::one();
  for (const MomentVariable& x : mono.variables()) v *= m.value(x);
  return v;
}

template <class Scalar>
GeneratorResidual<Scalar> evaluate_generators(const GeneratorSet& gens, const MomentData<Scalar>& m) {
  using T = ScalarTraits<Scalar>;
  if (gens.n != m.size())
    throw Error(ErrorCode::ShapeMismatch, "generators are over " + std::to_string(gens.n) + " vertices, moments over " +
                                              std::to_string(m.size()));
  GeneratorResidual<Scalar> out{T::zero(), std::nullopt};
  auto consider = [&](const Scalar& r, auto&& name) {
    Scalar a = T::abs(r);
    if (a > out.max_abs_residual) {
      out.max_abs_residual = a;
      out.worst = name();
    }
  };
  for (const MomentVariable& v : gens.linear) consider(m.value(v), [&] { return variable_name(v, gens.n); });
  for (const Quadric& q : gens.quadrics) {
    Scalar r = evaluate_monomial(q.binomial.lhs(), m) - evaluate_monomial(q.binomial.rhs(), m);
    consider(r, [&] { return binomial_name(q.binomial, gens.n); });
  }
  return out;
}

#define TREKSEM_INSTANTIATE(S)                                                                          \
  template std::vector<S> recover_lambda(const DirectedGraph&, const SymMatrix<S>&);                   \
  template MembershipResult<S> decide_membership(const DirectedGraph&, const MomentData<S>&, double); \
  template GeneratorResidual<S> evaluate_generators(const GeneratorSet&, const MomentData<S>&);        \
  template S evaluate_monomial(const Monomial&, const MomentData<S>&);

TREKSEM_INSTANTIATE(Rational)
TREKSEM_INSTANTIATE(double)

#undef TREKSEM_INSTANTIATE

}  // namespace treksem
