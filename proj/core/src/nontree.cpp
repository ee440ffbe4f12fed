#include "treksem/nontree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "treksem/error.hpp"

namespace treksem {

void validate_spec(const MatrixSpec& spec, int n) {
  auto in_range = [&](const std::vector<Vertex>& l) {
    return std::all_of(l.begin(), l.end(), [&](Vertex v) { return v >= 0 && v < n; });
  };
  if (spec.rows.empty() || spec.cols.empty()) throw Error(ErrorCode::BadLabels, "matrix needs rows and columns");
  for (const auto& r : spec.rows)
    if (r.size() > 1 || !in_range(r)) throw Error(ErrorCode::BadLabels, "row labels are the empty set or one vertex");
  for (const auto& c : spec.cols)
    if (c.empty() || c.size() > 2 || !in_range(c))
      throw Error(ErrorCode::BadLabels, "column labels are one vertex or a pair");
  for (const auto& r : spec.rows)
    for (const auto& c : spec.cols) {
      std::size_t k = r.size() + c.size();
      if (k < 2 || k > 3) throw Error(ErrorCode::BadLabels, "row and column combine to " + std::to_string(k) + " indices");
    }
}

MomentVariable spec_entry(const MatrixSpec& spec, std::size_t r, std::size_t c) {
  std::vector<Vertex> idx = spec.rows[r];
  idx.insert(idx.end(), spec.cols[c].begin(), spec.cols[c].end());
  if (idx.size() < 2 || idx.size() > 3) throw Error(ErrorCode::BadLabels, "entry needs 2 or 3 indices");
  return MomentVariable::from_indices(idx);
}

std::vector<std::vector<std::string>> symbolic_matrix(const MatrixSpec& spec, int n) {
  validate_spec(spec, n);
  std::vector<std::vector<std::string>> out(spec.rows.size());
  for (std::size_t r = 0; r < spec.rows.size(); ++r)
    for (std::size_t c = 0; c < spec.cols.size(); ++c) out[r].push_back(variable_name(spec_entry(spec, r, c), n));
  return out;
}

template <class Scalar>
Matrix<Scalar> build_matrix(const MatrixSpec& spec, const MomentData<Scalar>& m) {
  validate_spec(spec, m.size());
  Matrix<Scalar> out(spec.rows.size(), spec.cols.size());
  for (std::size_t r = 0; r < spec.rows.size(); ++r)
    for (std::size_t c = 0; c < spec.cols.size(); ++c) out(r, c) = m.value(spec_entry(spec, r, c));
  return out;
}

MomentPolynomial::MomentPolynomial(std::vector<std::pair<Rational, Monomial>> terms) {
  std::map<Monomial, Rational> acc;
  for (auto& [c, m] : terms) acc[m] += c;
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) terms_.emplace_back(c, m);
  // largest monomial first, the usual display order
  std::reverse(terms_.begin(), terms_.end());
}

std::string polynomial_name(const MomentPolynomial& f, int n) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [c, m] : f.terms()) {
    Rational a = abs(c);
    if (out.empty())
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    if (a != 1) out += format_rational(a) + "*";
    out += monomial_name(m, n);
  }
  return out;
}

template <class Scalar>
Scalar evaluate_polynomial(const MomentPolynomial& f, const MomentData<Scalar>& m) {
  Scalar acc = ScalarTraits<Scalar>::zero();
  for (const auto& [c, mono] : f.terms()) {
    Scalar v = ScalarTraits<Scalar>::from_rational(c);
    for (const MomentVariable& x : mono.variables()) v *= m.value(x);
    acc += v;
  }
  return acc;
}

namespace {

int permutation_sign(const std::vector<std::size_t>& p) {
  int s = 1;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (p[a] > p[b]) s = -s;
  return s;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t x = start; x < n; ++x) {
      cur.push_back(x);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

MomentPolynomial determinant_polynomial(const MatrixSpec& spec) {
  if (spec.rows.size() != spec.cols.size()) throw Error(ErrorCode::BadLabels, "determinant needs a square matrix");
  std::vector<std::size_t> p(spec.rows.size());
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::pair<Rational, Monomial>> terms;
  do {
    std::vector<MomentVariable> vars;
    for (std::size_t r = 0; r < p.size(); ++r) vars.push_back(spec_entry(spec, r, p[r]));
    terms.emplace_back(Rational(permutation_sign(p)), Monomial(std::move(vars)));
  } while (std::next_permutation(p.begin(), p.end()));
  return MomentPolynomial(std::move(terms));
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> all = [] {
    using V = std::vector<Vertex>;
    std::vector<Builtin> b;
    b.push_back({"two-cycle-det", "2-cycle 1->2->1: determinant of the 3 x 3 matrix with an empty-set row",
                 DirectedGraph(2, {{0, 1}, {1, 0}}), {}, {{V{}, V{0}, V{1}}, {V{0, 0}, V{0, 1}, V{1, 1}}}, 3});
    DirectedGraph triangle(3, {{0, 1}, {1, 2}, {0, 2}});
    b.push_back({"triangle-I3", "triangle 1->2->3, 1->3: 3-minors of the 3 x 7 matrix", triangle, {},
                 {{V{0}, V{1}, V{2}}, {V{0}, V{1}, V{0, 0}, V{0, 1}, V{0, 2}, V{1, 1}, V{1, 2}}}, 3});
    b.push_back({"triangle-I2", "triangle: 2-minors of the 3 x 4 submatrix", triangle, {},
                 {{V{0}, V{1}, V{2}}, {V{0}, V{0, 0}, V{0, 1}, V{0, 2}}}, 2});
    b.push_back({"triangle-f", "triangle: determinant of the 3 x 3 matrix with an empty-set row", triangle, {},
                 {{V{}, V{1}, V{2}}, {V{0, 2}, V{1, 1}, V{1, 2}}}, 3});
    b.push_back({"diamond-latent",
                 "diamond 4->1, 4->2, 1->3, 2->3 with 4 hidden: 3-minors of the observed 3 x 7 matrix",
                 DirectedGraph(4, {{3, 0}, {3, 1}, {0, 2}, {1, 2}}), {3},
                 {{V{0}, V{1}, V{2}}, {V{0}, V{1}, V{0, 0}, V{0, 1}, V{0, 2}, V{1, 1}, V{1, 2}}}, 3});
    b.push_back({"three-cycle", "3-cycle 1->2->3->1: maximal minors of the 4 x 6 matrix",
                 DirectedGraph(3, {{0, 1}, {1, 2}, {2, 0}}), {},
                 {{V{}, V{0}, V{1}, V{2}}, {V{0, 0}, V{0, 1}, V{1, 2}, V{1, 1}, V{0, 2}, V{2, 2}}}, 4});
    return b;
  }();
  return all;
}

const Builtin& builtin(std::string_view name) {
  for (const auto& b : builtins())
    if (b.name == name) return b;
  throw Error(ErrorCode::InvalidArgument, "unknown built-in '" + std::string(name) + "'");
}

namespace {

MomentPolynomial triangle_f(int power) {
  auto s = [](Vertex i, Vertex j) { return MomentVariable::cov(i - 1, j - 1); };
  auto t = [](Vertex i, Vertex j, Vertex k) { return MomentVariable::third(i - 1, j - 1, k - 1); };
  std::vector<MomentVariable> last{s(1, 3)};
  for (int r = 0; r < power; ++r) last.push_back(t(2, 2, 3));
  std::vector<std::pair<Rational, Monomial>> terms = {
      {Rational(1), Monomial{s(2, 3), t(1, 3, 3), t(2, 2, 2)}},
      {Rational(-1), Monomial{s(2, 3), t(1, 2, 3), t(2, 2, 3)}},
      {Rational(-1), Monomial{s(2, 2), t(1, 3, 3), t(2, 2, 3)}},
      {Rational(1), Monomial(last)},
      {Rational(1), Monomial{s(2, 2), t(1, 2, 3), t(2, 3, 3)}},
      {Rational(-1), Monomial{s(1, 3), t(2, 2, 2), t(2, 3, 3)}},
  };
  return MomentPolynomial(std::move(terms));
}

template <class Scalar>
MomentData<Scalar> sample_moments(const DirectedGraph& g, const std::vector<Vertex>& hidden, std::uint64_t seed,
                                  const SampleConfig& config) {
  MomentData<Scalar> m = forward_moments(g, sample_params<Scalar>(g, seed, config));
  if (hidden.empty()) return m;
  std::vector<bool> h(g.size(), false);
  for (Vertex v : hidden) h[v] = true;
  const int n = g.size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (h[i] || h[j]) m.cov.at(i, j) = ScalarTraits<Scalar>::zero();
      for (int k = j; k < n; ++k)
        if (h[i] || h[j] || h[k]) m.third.at(i, j, k) = ScalarTraits<Scalar>::zero();
    }
  return m;
}

std::vector<std::uint64_t> trial_seeds(const VanishingOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::vector<std::uint64_t> out(o.trials);
  for (auto& s : out) s = rng();
  return out;
}

}  // namespace

MomentPolynomial triangle_f_printed() { return triangle_f(3); }
MomentPolynomial triangle_f_squared() { return triangle_f(2); }

std::size_t VanishingReport::vanishing_count() const {
  return static_cast<std::size_t>(std::count_if(minors.begin(), minors.end(), [](const auto& m) { return m.vanishes; }));
}

template <class Scalar>
VanishingReport minor_vanishing_report(const DirectedGraph& g, const std::vector<Vertex>& hidden,
                                       const MatrixSpec& spec, int r, const VanishingOptions& options) {
  using T = ScalarTraits<Scalar>;
  validate_spec(spec, g.size());
  if (r < 1 || static_cast<std::size_t>(r) > std::min(spec.rows.size(), spec.cols.size()))
    throw Error(ErrorCode::InvalidArgument, "minor size " + std::to_string(r) + " does not fit the matrix");
  for (Vertex v : hidden)
    if (v < 0 || v >= g.size()) throw Error(ErrorCode::InvalidArgument, "hidden vertex outside the graph");
  VanishingReport report;
  report.trials = options.trials;
  report.minor_size = r;
  auto row_sets = combinations(spec.rows.size(), r);
  auto col_sets = combinations(spec.cols.size(), r);
  for (const auto& rs : row_sets)
    for (const auto& cs : col_sets) report.minors.push_back({rs, cs, 0.0, true});
  std::vector<std::vector<std::size_t>> perms;
  {
    std::vector<std::size_t> p(r);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  for (std::uint64_t seed : trial_seeds(options)) {
    Matrix<Scalar> full = build_matrix(spec, sample_moments<Scalar>(g, hidden, seed, options.sampling));
    for (MinorResidual& minor : report.minors) {
      Matrix<Scalar> sub(r, r);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) sub(a, b) = full(minor.rows[a], minor.cols[b]);
      double biggest = 0.0;
      for (const auto& p : perms) {
        double prod = 1.0;
        for (int a = 0; a < r; ++a) prod *= std::fabs(T::to_double(sub(a, p[a])));
        biggest = std::max(biggest, prod);
      }
      Scalar det = determinant(sub);
      double rel = std::fabs(T::to_double(det)) / (1.0 + biggest);
      minor.max_relative_residual = std::max(minor.max_relative_residual, rel);
      if constexpr (T::kind == ScalarKind::Exact)
        if (!T::is_zero(det)) minor.vanishes = false;
    }
  }
  if constexpr (T::kind == ScalarKind::Float)
    for (MinorResidual& minor : report.minors) minor.vanishes = minor.max_relative_residual <= options.tolerance;
  return report;
}

template <class Scalar>
PolynomialReport polynomial_vanishing_report(const DirectedGraph& g, const std::vector<Vertex>& hidden,
                                             const MomentPolynomial& f, const VanishingOptions& options) {
  using T = ScalarTraits<Scalar>;
  PolynomialReport report;
  report.trials = options.trials;
  for (std::uint64_t seed : trial_seeds(options)) {
    MomentData<Scalar> m = sample_moments<Scalar>(g, hidden, seed, options.sampling);
    double biggest = 0.0;
    for (const auto& [c, mono] : f.terms()) {
      double v = std::fabs(c.get_d());
      for (const MomentVariable& x : mono.variables()) v *= std::fabs(T::to_double(m.value(x)));
      biggest = std::max(biggest, v);
    }
    Scalar val = evaluate_polynomial(f, m);
    double rel = std::fabs(T::to_double(val)) / (1.0 + biggest);
    report.max_relative_residual = std::max(report.max_relative_residual, rel);
    if constexpr (T::kind == ScalarKind::Exact)
      if (!T::is_zero(val)) report.vanishes = false;
  }
  if constexpr (T::kind == ScalarKind::Float) report.vanishes = report.max_relative_residual <= options.tolerance;
  return report;
}

#define TREKSEM_INSTANTIATE(S)                                                                                   \
  template Matrix<S> build_matrix(const MatrixSpec&, const MomentData<S>&);                                     \
  template S evaluate_polynomial(const MomentPolynomial&, const MomentData<S>&);                                \
  template VanishingReport minor_vanishing_report<S>(const DirectedGraph&, const std::vector<Vertex>&,          \
                                                     const MatrixSpec&, int, const VanishingOptions&);          \
  template PolynomialReport polynomial_vanishing_report<S>(const DirectedGraph&, const std::vector<Vertex>&,    \
                                                           const MomentPolynomial&, const VanishingOptions&);

TREKSEM_INSTANTIATE(Rational)
TREKSEM_INSTANTIATE(double)

#undef TREKSEM_INSTANTIATE

}  // namespace treksem
