#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "oracles.hpp"
#include "treksem/error.hpp"
#include "treksem/families.hpp"
#include "treksem/nontree.hpp"
#include "treksem/trekmat.hpp"

using namespace treksem;

namespace {

MomentVariable s(int i, int j) { return MomentVariable::cov(i - 1, j - 1); }
MomentVariable t(int i, int j, int k) { return MomentVariable::third(i - 1, j - 1, k - 1); }

using V = std::vector<Vertex>;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

MomentPolynomial negate(const MomentPolynomial& f) {
  std::vector<std::pair<Rational, Monomial>> terms;
  for (const auto& [c, m] : f.terms()) terms.emplace_back(Rational(-c), m);
  return MomentPolynomial(std::move(terms));
}

VanishingOptions options(std::size_t trials, std::uint64_t seed = 1) {
  VanishingOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("matrix specs") {
  const Builtin& two = builtin("two-cycle-det");
  CHECK(symbolic_matrix(two.spec, 2) == std::vector<std::vector<std::string>>{{"s_11", "s_12", "s_22"},
                                                                              {"t_111", "t_112", "t_122"},
                                                                              {"t_112", "t_122", "t_222"}});
  CHECK(spec_entry(builtin("triangle-f").spec, 2, 2) == t(2, 3, 3));

  CHECK(code_of([] { validate_spec({{V{}}, {V{0}}}, 2); }) == ErrorCode::BadLabels);
  CHECK(code_of([] { validate_spec({{V{0, 1}}, {V{0}}}, 2); }) == ErrorCode::BadLabels);
  CHECK(code_of([] { validate_spec({{V{0}}, {V{}}}, 2); }) == ErrorCode::BadLabels);
  CHECK(code_of([] { validate_spec({{V{0}}, {V{0, 1, 1}}}, 2); }) == ErrorCode::BadLabels);
  CHECK(code_of([] { validate_spec({{V{0}}, {V{2}}}, 2); }) == ErrorCode::BadLabels);
  CHECK_NOTHROW(validate_spec({{V{}, V{0}}, {V{0, 1}}}, 2));

  MomentData<Rational> m(2);
  CHECK(code_of([&] { build_matrix(MatrixSpec{{V{}}, {V{0}}}, m); }) == ErrorCode::BadLabels);
}

TEST_CASE("trek matrices are reproduced by row and column labels") {
  DirectedGraph star = star_graph(4);
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{3, 4}}) {
    TrekMatrix a = trek_matrix(star, i, j);
    MatrixSpec spec{{V{i}, V{j}}, {}};
    for (const auto& c : a.columns) spec.cols.push_back(c.indices());
    for (std::size_t c = 0; c < a.columns.size(); ++c)
      for (int r = 0; r < 2; ++r) CHECK(spec_entry(spec, static_cast<std::size_t>(r), c) == a.entry(r, c));
  }
}

TEST_CASE("polynomials") {
  MomentPolynomial f({{Rational(1), Monomial{s(1, 2)}}, {Rational(2), Monomial{s(1, 1)}}, {Rational(-1), Monomial{s(1, 2)}}});
  REQUIRE(f.terms().size() == 1);
  CHECK(f.terms()[0].first == 2);
  CHECK(MomentPolynomial({{Rational(0), Monomial{s(1, 2)}}}).is_zero());

  MomentData<Rational> m(2);
  m.cov.at(0, 0) = 3;
  m.cov.at(0, 1) = 5;
  CHECK(evaluate_polynomial(f, m) == 6);
  CHECK(evaluate_polynomial(MomentPolynomial{}, m) == 0);
  CHECK(polynomial_name(MomentPolynomial{}, 2) == "0");
  CHECK(polynomial_name(MomentPolynomial({{Rational(-1, 2), Monomial{s(1, 1), s(1, 1)}}, {Rational(1), Monomial{s(1, 2)}}}), 2)
            .find("s_11^2") != std::string::npos);
}

TEST_CASE("determinant polynomial matches numeric determinants") {
  gen::Rng rng(7);
  for (const Builtin& b : builtins()) {
    if (b.spec.rows.size() != b.spec.cols.size()) continue;
    MomentPolynomial det = determinant_polynomial(b.spec);
    for (int trial = 0; trial < 5; ++trial) {
      auto m = forward_moments(b.graph, sample_params<Rational>(b.graph, static_cast<std::uint64_t>(trial) + 40));
      // perturb so the value is generic
      VariableIndex idx(b.graph.size());
      for (const auto& v : idx.all()) m.value(v) += gen::rational(rng);
      auto a = build_matrix(b.spec, m);
      oracle::Dense d(a.rows(), std::vector<Rational>(a.cols()));
      for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) d[r][c] = a(r, c);
      CHECK(evaluate_polynomial(det, m) == oracle::leibniz_det(d));
    }
  }
  CHECK_THROWS_AS(determinant_polynomial(builtin("triangle-I3").spec), Error);
}

TEST_CASE("the triangle cubic") {
  MomentPolynomial det = determinant_polynomial(builtin("triangle-f").spec);
  auto sorted_terms = [](const MomentPolynomial& p) {
    auto v = p.terms();
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    return v;
  };
  CHECK(sorted_terms(det) == sorted_terms(negate(triangle_f_squared())));
  CHECK(triangle_f_printed().terms().size() == 6);

  const Builtin& tri = builtin("triangle-f");
  auto squared = polynomial_vanishing_report<Rational>(tri.graph, {}, triangle_f_squared(), options(40));
  CHECK(squared.vanishes);
  CHECK(squared.trials == 40);
  auto printed = polynomial_vanishing_report<Rational>(tri.graph, {}, triangle_f_printed(), options(40));
  CHECK_FALSE(printed.vanishes);
  CHECK(printed.max_relative_residual > 1e-3);

  // the star on 1, 2, 3 is the triangle with lambda_23 = 0, so f still vanishes
  CHECK(polynomial_vanishing_report<Rational>(star_graph(2), {}, triangle_f_squared(), options(10)).vanishes);
  // the chain 1 -> 3 -> 2 is not a submodel
  DirectedGraph other(3, {{0, 2}, {2, 1}});
  CHECK_FALSE(polynomial_vanishing_report<Rational>(other, {}, triangle_f_squared(), options(10)).vanishes);
}

TEST_CASE("triangle relations from the trek rule") {
  DirectedGraph tri = builtin("triangle-I3").graph;
  MomentPolynomial quad_t({{Rational(1), Monomial{t(1, 2, 3), t(1, 2, 3)}}, {Rational(-1), Monomial{t(1, 2, 2), t(1, 3, 3)}}});
  MomentPolynomial mixed({{Rational(1), Monomial{s(1, 3), t(1, 2, 3)}}, {Rational(-1), Monomial{s(1, 2), t(1, 3, 3)}}});
  CHECK(polynomial_vanishing_report<Rational>(tri, {}, quad_t, options(50)).vanishes);
  CHECK(polynomial_vanishing_report<Rational>(tri, {}, mixed, options(50)).vanishes);
}

TEST_CASE("built-in relations vanish in both scalar kinds") {
  for (const Builtin& b : builtins()) {
    CAPTURE(b.name);
    auto exact = minor_vanishing_report<Rational>(b.graph, b.hidden, b.spec, b.minor_size, options(30));
    CHECK(exact.all_vanish());
    auto approx = minor_vanishing_report<double>(b.graph, b.hidden, b.spec, b.minor_size, options(30));
    CHECK(approx.all_vanish());
    for (const auto& m : approx.minors) CHECK(m.max_relative_residual < 1e-9);
  }
}

TEST_CASE("three-cycle 3-minors") {
  const Builtin& b = builtin("three-cycle");
  auto exact = minor_vanishing_report<Rational>(b.graph, {}, b.spec, 3, options(30));
  CHECK(exact.minors.size() == 80);
  CHECK(exact.vanishing_count() == 12);
  auto approx = minor_vanishing_report<double>(b.graph, {}, b.spec, 3, options(30));
  for (std::size_t k = 0; k < exact.minors.size(); ++k) CHECK(exact.minors[k].vanishes == approx.minors[k].vanishes);
}

TEST_CASE("reports are deterministic and validate their input") {
  const Builtin& b = builtin("triangle-I2");
  auto x = minor_vanishing_report<double>(b.graph, {}, b.spec, 2, options(5, 9));
  auto y = minor_vanishing_report<double>(b.graph, {}, b.spec, 2, options(5, 9));
  REQUIRE(x.minors.size() == y.minors.size());
  for (std::size_t k = 0; k < x.minors.size(); ++k) CHECK(x.minors[k].max_relative_residual == y.minors[k].max_relative_residual);

  CHECK(code_of([&] { minor_vanishing_report<Rational>(b.graph, {}, b.spec, 4, options(1)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { minor_vanishing_report<Rational>(b.graph, {7}, b.spec, 2, options(1)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { minor_vanishing_report<Rational>(b.graph, {}, MatrixSpec{{V{}}, {V{0}}}, 1, options(1)); }) ==
        ErrorCode::BadLabels);
  CHECK(code_of([] { builtin("pentagon"); }) == ErrorCode::InvalidArgument);

  // a relation that fails shows up as non-vanishing
  MatrixSpec wrong{{V{0}, V{1}}, {V{0}, V{1}}};
  CHECK_FALSE(minor_vanishing_report<Rational>(b.graph, {}, wrong, 2, options(5)).all_vanish());
}
