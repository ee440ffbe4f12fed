#include "treksem/moments.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "treksem/error.hpp"

namespace treksem {

namespace {

template <class Scalar>
void check_shape(const DirectedGraph& g, const ModelParameters<Scalar>& p) {
  if (p.lambda.size() != g.num_edges() || p.omega2.size() != static_cast<std::size_t>(g.size()) ||
      p.omega3.size() != static_cast<std::size_t>(g.size()))
    throw Error(ErrorCode::ShapeMismatch, "parameters need " + std::to_string(g.num_edges()) + " edge weights and " +
                                              std::to_string(g.size()) + " error moments of each order");
}

// Dense n^3 scratch tensor for the mode products.
template <class Scalar>
struct Cube {
  int n;
  std::vector<Scalar> v;
  explicit Cube(int n) : n(n), v(static_cast<std::size_t>(n) * n * n, ScalarTraits<Scalar>::zero()) {}
  Scalar& operator()(int i, int j, int k) { return v[(static_cast<std::size_t>(i) * n + j) * n + k]; }
};

}  // namespace

template <class Scalar>
Matrix<Scalar> SymMatrix<Scalar>::dense() const {
  Matrix<Scalar> m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = at(i, j);
  return m;
}

template <class Scalar>
double MomentData<Scalar>::max_abs() const {
  using T = ScalarTraits<Scalar>;
  double best = 0.0;
  const int n = size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      best = std::max(best, T::to_double(T::abs(cov.at(i, j))));
      for (int k = j; k < n; ++k) best = std::max(best, T::to_double(T::abs(third.at(i, j, k))));
    }
  return best;
}

template <class Scalar>
Matrix<Scalar> lambda_matrix(const DirectedGraph& g, const std::vector<Scalar>& lambda) {
  Matrix<Scalar> m(g.size(), g.size());
  for (std::size_t e = 0; e < g.num_edges(); ++e) m(g.edges()[e].tail, g.edges()[e].head) = lambda[e];
  return m;
}

template <class Scalar>
Matrix<Scalar> transfer_matrix(const DirectedGraph& g, const std::vector<Scalar>& lambda) {
  const int n = g.size();
  Matrix<Scalar> lam = lambda_matrix(g, lambda);
  if (!is_acyclic(g)) {
    Matrix<Scalar> m = Matrix<Scalar>::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) -= lam(i, j);
    auto inv = inverse(std::move(m));
    if (!inv) throw Error(ErrorCode::SingularSystem, "I - Lambda is singular");
    return *inv;
  }
  // B(a, i) = [a == i] + sum_{l in pa(i)} B(a, l) lambda_li
  Matrix<Scalar> b = Matrix<Scalar>::identity(n);
  for (Vertex i : topological_order(g))
    for (Vertex l : g.parents(i))
      for (int a = 0; a < n; ++a)
        if (!ScalarTraits<Scalar>::is_zero(b(a, l))) b(a, i) += b(a, l) * lam(l, i);
  return b;
}

template <class Scalar>
SymTensor3<Scalar> tucker(const SymTensor3<Scalar>& t, const Matrix<Scalar>& a) {
  const int n = t.size();
  Cube<Scalar> u(n), w(n);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Scalar acc = ScalarTraits<Scalar>::zero();
        for (int x = 0; x < n; ++x) acc += t.at(x, b, c) * a(x, i);
        u(i, b, c) = acc;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        Scalar acc = ScalarTraits<Scalar>::zero();
        for (int x = 0; x < n; ++x) acc += u(i, x, c) * a(x, j);
        w(i, j, c) = acc;
      }
  SymTensor3<Scalar> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Scalar acc = ScalarTraits<Scalar>::zero();
        for (int x = 0; x < n; ++x) acc += w(i, j, x) * a(x, k);
        out.at(i, j, k) = acc;
      }
  return out;
}

template <class Scalar>
SymMatrix<Scalar> congruence(const SymMatrix<Scalar>& s, const Matrix<Scalar>& a) {
  const int n = s.size();
  Matrix<Scalar> sa(n, n);
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < n; ++j) {
      Scalar acc = ScalarTraits<Scalar>::zero();
      for (int y = 0; y < n; ++y) acc += s.at(x, y) * a(y, j);
      sa(x, j) = acc;
    }
  SymMatrix<Scalar> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Scalar acc = ScalarTraits<Scalar>::zero();
      for (int x = 0; x < n; ++x) acc += a(x, i) * sa(x, j);
      out.at(i, j) = acc;
    }
  return out;
}

template <class Scalar>
MomentData<Scalar> forward_moments(const DirectedGraph& g, const ModelParameters<Scalar>& p) {
  check_shape(g, p);
  const int n = g.size();
  Matrix<Scalar> b = transfer_matrix(g, p.lambda);
  MomentData<Scalar> m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // only common ancestors of i and j contribute
      std::vector<int> common;
      for (int a = 0; a < n; ++a)
        if (!ScalarTraits<Scalar>::is_zero(b(a, i)) && !ScalarTraits<Scalar>::is_zero(b(a, j))) common.push_back(a);
      Scalar& s = m.cov.at(i, j);
      std::vector<Scalar> w;  // omega3_a b_ai b_aj, reused for every k
      for (int a : common) {
        Scalar bb = b(a, i) * b(a, j);
        s += p.omega2[a] * bb;
        w.push_back(p.omega3[a] * bb);
      }
      for (int k = j; k < n; ++k) {
        Scalar& t = m.third.at(i, j, k);
        for (std::size_t x = 0; x < common.size(); ++x)
          if (!ScalarTraits<Scalar>::is_zero(b(common[x], k))) t += w[x] * b(common[x], k);
      }
    }
  return m;
}

template <class Scalar>
MomentData<Scalar> recursive_moments(const DirectedGraph& g, const ModelParameters<Scalar>& p) {
  check_shape(g, p);
  using T = ScalarTraits<Scalar>;
  std::vector<Vertex> order = topological_order(g);
  MomentData<Scalar> m(g.size());
  std::vector<Vertex> done;
  for (Vertex r : order) {
    std::vector<std::pair<Vertex, Scalar>> pa;
    for (Vertex l : g.parents(r)) pa.emplace_back(l, p.lambda[*g.edge_index(l, r)]);

    for (Vertex i : done) {
      Scalar acc = T::zero();
      for (const auto& [l, w] : pa) acc += w * m.cov.at(i, l);
      m.cov.at(i, r) = acc;
    }
    Scalar a = p.omega2[r];
    for (const auto& [l1, w1] : pa)
      for (const auto& [l2, w2] : pa) a += w1 * w2 * m.cov.at(l1, l2);
    m.cov.at(r, r) = a;

    for (std::size_t x = 0; x < done.size(); ++x)
      for (std::size_t y = x; y < done.size(); ++y) {
        Scalar acc = T::zero();
        for (const auto& [l, w] : pa) acc += w * m.third.at(done[x], done[y], l);
        m.third.at(done[x], done[y], r) = acc;
      }
    for (Vertex i : done) {
      Scalar acc = T::zero();
      for (const auto& [l1, w1] : pa)
        for (const auto& [l2, w2] : pa) acc += w1 * w2 * m.third.at(i, l1, l2);
      m.third.at(i, r, r) = acc;
    }
    Scalar b = p.omega3[r];
    for (const auto& [l1, w1] : pa)
      for (const auto& [l2, w2] : pa)
        for (const auto& [l3, w3] : pa) b += w1 * w2 * w3 * m.third.at(l1, l2, l3);
    m.third.at(r, r, r) = b;
    done.push_back(r);
  }
  return m;
}

template <class Scalar>
SimpleTrekParams<Scalar> params_to_ab(const DirectedGraph& g, const ModelParameters<Scalar>& p) {
  MomentData<Scalar> m = recursive_moments(g, p);
  SimpleTrekParams<Scalar> q;
  for (Vertex i = 0; i < g.size(); ++i) {
    q.a.push_back(m.cov.at(i, i));
    q.b.push_back(m.third.at(i, i, i));
  }
  q.lambda = p.lambda;
  return q;
}

TrekExpansion::TrekExpansion(const DirectedGraph& g) : g_(g), index_(g.size()) {
  if (!is_acyclic(g)) throw Error(ErrorCode::CyclicGraph, "the trek rule needs an acyclic graph");
  terms_.resize(index_.size());
  for (std::size_t id = 0; id < index_.size(); ++id) {
    const MomentVariable& v = index_.variable(id);
    std::map<std::pair<Vertex, std::vector<std::pair<std::size_t, int>>>, long> collected;
    for (const Trek& t : enumerate_simple_treks(g, v.indices())) {
      std::vector<int> mult = t.edge_multiplicities(g);
      std::vector<std::pair<std::size_t, int>> powers;
      for (std::size_t e = 0; e < mult.size(); ++e)
        if (mult[e]) powers.emplace_back(e, mult[e]);
      ++collected[{t.top, std::move(powers)}];
    }
    for (auto& [key, count] : collected) terms_[id].push_back(TrekTerm{key.first, key.second, count});
  }
}

namespace {

// Exact evaluation without a gcd per term: the lambda monomials of one
// variable are summed as integers over the common denominator
// prod den(lambda_e)^(max exponent of e), grouped by top.
MomentData<Rational> evaluate_exact(const VariableIndex& index, const std::vector<std::vector<TrekTerm>>& terms,
                                    int n, const SimpleTrekParams<Rational>& q) {
  const std::size_t ne = q.lambda.size();
  std::vector<std::vector<mpz_class>> num_pow(ne), den_pow(ne);
  auto power = [](std::vector<mpz_class>& table, const mpz_class& base, int k) -> const mpz_class& {
    if (table.empty()) table.emplace_back(1);
    while (static_cast<int>(table.size()) <= k) table.push_back(table.back() * base);
    return table[k];
  };
  MomentData<Rational> m(n);
  std::vector<int> max_pow(ne, 0);
  std::vector<int> pw(ne, 0);
  std::vector<std::size_t> support;
  std::vector<mpz_class> by_top(n);
  std::vector<bool> used(n);
  mpz_class t;
  for (std::size_t id = 0; id < index.size(); ++id) {
    const auto& ts = terms[id];
    if (ts.empty()) continue;
    const MomentVariable& v = index.variable(id);
    const auto& top_value = v.is_cov() ? q.a : q.b;
    support.clear();
    for (const TrekTerm& term : ts)
      for (const auto& [e, k] : term.edge_powers) {
        if (max_pow[e] == 0) support.push_back(e);
        max_pow[e] = std::max(max_pow[e], k);
      }
    std::fill(used.begin(), used.end(), false);
    for (const TrekTerm& term : ts) {
      t = term.coefficient;
      for (const auto& [e, k] : term.edge_powers) pw[e] = k;
      for (std::size_t e : support) {
        if (pw[e]) t *= power(num_pow[e], q.lambda[e].get_num(), pw[e]);
        if (pw[e] < max_pow[e]) t *= power(den_pow[e], q.lambda[e].get_den(), max_pow[e] - pw[e]);
      }
      for (const auto& ep : term.edge_powers) pw[ep.first] = 0;
      if (!used[term.top]) {
        by_top[term.top] = 0;
        used[term.top] = true;
      }
      by_top[term.top] += t;
    }
    mpz_class den = 1;
    for (std::size_t e : support) {
      den *= power(den_pow[e], q.lambda[e].get_den(), max_pow[e]);
      max_pow[e] = 0;
    }
    Rational acc = 0;
    for (Vertex top = 0; top < n; ++top)
      if (used[top]) acc += top_value[top] * Rational(by_top[top]);
    acc /= Rational(den);
    m.value(v) = acc;
  }
  return m;
}

}  // namespace

template <class Scalar>
MomentData<Scalar> TrekExpansion::evaluate(const SimpleTrekParams<Scalar>& q) const {
  if (q.a.size() != static_cast<std::size_t>(g_.size()) || q.b.size() != static_cast<std::size_t>(g_.size()) ||
      q.lambda.size() != g_.num_edges())
    throw Error(ErrorCode::ShapeMismatch, "simple trek parameters do not fit the graph");
  if constexpr (ScalarTraits<Scalar>::kind == ScalarKind::Exact) {
    return evaluate_exact(index_, terms_, g_.size(), q);
  } else {
    MomentData<Scalar> m(g_.size());
    Scalar prod = ScalarTraits<Scalar>::zero();
    for (std::size_t id = 0; id < index_.size(); ++id) {
      const MomentVariable& v = index_.variable(id);
      const auto& top_value = v.is_cov() ? q.a : q.b;
      Scalar& acc = m.value(v);
      for (const TrekTerm& term : terms_[id]) {
        prod = top_value[term.top];
        for (const auto& [e, pw] : term.edge_powers)
          for (int r = 0; r < pw; ++r) prod *= q.lambda[e];
        if (term.coefficient != 1) prod *= term.coefficient;
        acc += prod;
      }
    }
    return m;
  }
}

template <class Scalar>
MomentData<Scalar> trek_rule_moments(const DirectedGraph& g, const SimpleTrekParams<Scalar>& q) {
  return TrekExpansion(g).evaluate(q);
}

namespace {

long draw(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rational draw_rational(std::mt19937_64& rng, const SampleConfig& c, bool positive, bool allow_zero) {
  for (;;) {
    long num = positive ? draw(rng, 1, c.max_numerator) : draw(rng, -c.max_numerator, c.max_numerator);
    long den = draw(rng, 1, c.max_denominator);
    if (num == 0 && !allow_zero) continue;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
}

ModelParameters<Rational> sample_exact(const DirectedGraph& g, std::uint64_t seed, const SampleConfig& c) {
  if (c.max_numerator < 1 || c.max_denominator < 1)
    throw Error(ErrorCode::InvalidArgument, "sampling bounds must be positive");
  std::mt19937_64 rng(seed);
  const bool cyclic = !is_acyclic(g);
  for (int attempt = 0; attempt <= c.max_redraws; ++attempt) {
    ModelParameters<Rational> p;
    for (std::size_t e = 0; e < g.num_edges(); ++e) p.lambda.push_back(draw_rational(rng, c, false, c.allow_zero_lambda));
    for (Vertex i = 0; i < g.size(); ++i) p.omega2.push_back(draw_rational(rng, c, true, false));
    for (Vertex i = 0; i < g.size(); ++i) p.omega3.push_back(draw_rational(rng, c, false, c.allow_zero_omega3));
    if (!cyclic) return p;
    Matrix<Rational> m = Matrix<Rational>::identity(g.size());
    Matrix<Rational> lam = lambda_matrix(g, p.lambda);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) m(i, j) -= lam(i, j);
    if (sgn(determinant(m)) != 0) return p;
  }
  throw Error(ErrorCode::SingularSystem, "no invertible I - Lambda after " + std::to_string(c.max_redraws) + " redraws");
}

}  // namespace

template <class Scalar>
ModelParameters<Scalar> sample_params(const DirectedGraph& g, std::uint64_t seed, const SampleConfig& c) {
  if constexpr (ScalarTraits<Scalar>::kind == ScalarKind::Exact)
    return sample_exact(g, seed, c);
  else
    return to_float(sample_exact(g, seed, c));
}

template <class Scalar>
MomentData<Scalar> marginal(const MomentData<Scalar>& m, const std::vector<Vertex>& keep) {
  const int k = static_cast<int>(keep.size());
  MomentData<Scalar> out(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      out.cov.at(i, j) = m.cov.at(keep[i], keep[j]);
      for (int l = j; l < k; ++l) out.third.at(i, j, l) = m.third.at(keep[i], keep[j], keep[l]);
    }
  return out;
}

MomentData<double> to_float(const MomentData<Rational>& m) {
  const int n = m.size();
  MomentData<double> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out.cov.at(i, j) = m.cov.at(i, j).get_d();
      for (int k = j; k < n; ++k) out.third.at(i, j, k) = m.third.at(i, j, k).get_d();
    }
  return out;
}

ModelParameters<double> to_float(const ModelParameters<Rational>& p) {
  ModelParameters<double> out;
  for (const auto& x : p.lambda) out.lambda.push_back(x.get_d());
  for (const auto& x : p.omega2) out.omega2.push_back(x.get_d());
  for (const auto& x : p.omega3) out.omega3.push_back(x.get_d());
  return out;
}

#define TREKSEM_INSTANTIATE(S)                                                                   \
  template class SymMatrix<S>;                                                                   \
  template struct MomentData<S>;                                                                 \
  template Matrix<S> lambda_matrix(const DirectedGraph&, const std::vector<S>&);                 \
  template Matrix<S> transfer_matrix(const DirectedGraph&, const std::vector<S>&);               \
  template SymTensor3<S> tucker(const SymTensor3<S>&, const Matrix<S>&);                         \
  template SymMatrix<S> congruence(const SymMatrix<S>&, const Matrix<S>&);                       \
  template MomentData<S> forward_moments(const DirectedGraph&, const ModelParameters<S>&);       \
  template MomentData<S> recursive_moments(const DirectedGraph&, const ModelParameters<S>&);     \
  template SimpleTrekParams<S> params_to_ab(const DirectedGraph&, const ModelParameters<S>&);    \
  template MomentData<S> TrekExpansion::evaluate(const SimpleTrekParams<S>&) const;              \
  template MomentData<S> trek_rule_moments(const DirectedGraph&, const SimpleTrekParams<S>&);    \
  template MomentData<S> marginal(const MomentData<S>&, const std::vector<Vertex>&);              \
  template ModelParameters<S> sample_params(const DirectedGraph&, std::uint64_t, const SampleConfig&);

TREKSEM_INSTANTIATE(Rational)
TREKSEM_INSTANTIATE(double)

#undef TREKSEM_INSTANTIATE

}  // namespace treksem
