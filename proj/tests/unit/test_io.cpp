#include <doctest.h>

#include <string>

#include "generators.hpp"
#include "treksem/error.hpp"
#include "treksem/families.hpp"
#include "treksem/io.hpp"

using namespace treksem;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("rationals") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(format_rational(parse_rational("-6/4")) == "-3/2");
  CHECK(format_rational(parse_rational("8/4")) == "2");
  for (const char* bad : {"", "1/0", "0.5", "1/", "x", "1/-2x"}) CHECK(code_of([&] { parse_rational(bad); }) == ErrorCode::ParseError);
}

TEST_CASE("graph files") {
  DirectedGraph g = parse_graph(R"({"n": 3, "edges": [[1, 2], [3, 2]]})");
  CHECK(g == DirectedGraph(3, {{0, 1}, {2, 1}}));
  gen::Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph h = gen::dag(rng, 1 + trial % 7);
    CHECK(parse_graph(graph_to_json(h)) == h);
  }
  CHECK(code_of([] { parse_graph("{"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_graph(R"({"edges": []})"); }) == ErrorCode::ParseError);
  CHECK(message_of([] { parse_graph(R"({"n": 2, "edges": [[1, 2], [1]]})"); }).find("edges[1]") != std::string::npos);
  CHECK(code_of([] { parse_graph(R"({"n": 2, "edges": [[1, 1]]})"); }) == ErrorCode::InvalidGraph);
  CHECK(code_of([] { parse_graph(R"({"n": 2, "edges": [[1, 3]]})"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_graph(R"({"n": 2, "edges": [[1, 2], [1, 2]]})"); }) == ErrorCode::InvalidGraph);
}

TEST_CASE("moment files") {
  gen::Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph g = gen::polytree(rng, 1 + trial % 6);
    auto m = forward_moments(g, gen::params(rng, g));
    CHECK(parse_moments<Rational>(moments_to_json(m)) == m);
    auto f = to_float(m);
    CHECK(parse_moments<double>(moments_to_json(f)) == f);
    CHECK(parse_moments<double>(moments_to_json(m)) == f);
  }

  auto m = parse_moments<Rational>(R"({"n": 2, "S": [[2, 1, "1/2"], [1, 2, "1/2"]], "T": [[2, 1, 1, 3]]})");
  CHECK(m.cov.at(0, 1) == Rational(1, 2));
  CHECK(m.cov.at(0, 0) == 0);
  CHECK(m.third.at(0, 0, 1) == 3);

  CHECK(code_of([] { parse_moments<Rational>(R"({"n": 2, "S": [[2, 1, 1], [1, 2, 2]], "T": []})"); }) ==
        ErrorCode::AsymmetricInput);
  CHECK(code_of([] { parse_moments<Rational>(R"({"n": 1, "S": [[1, 1, 0.5]], "T": []})"); }) == ErrorCode::ParseError);
  CHECK(parse_moments<double>(R"({"n": 1, "S": [[1, 1, 0.5]], "T": []})").cov.at(0, 0) == 0.5);
  CHECK(code_of([] { parse_moments<Rational>(R"({"n": 1, "S": [[1, 2, 1]], "T": []})"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_moments<Rational>(R"({"n": 1, "S": [[1, 1, "a"]], "T": []})"); }) == ErrorCode::ParseError);
}

TEST_CASE("parameter files") {
  DirectedGraph g(3, {{0, 1}, {2, 1}});
  ModelParameters<Rational> p{{Rational(1, 2), -2}, {1, 2, 3}, {0, 1, Rational(-1, 3)}};
  CHECK(parse_params<Rational>(g, params_to_json(g, p)) == p);
  auto swapped = parse_params<Rational>(
      g, R"({"lambda": [[3, 2, -2], [1, 2, "1/2"]], "omega2": [1, 2, 3], "omega3": [0, 1, "-1/3"]})");
  CHECK(swapped == p);
  CHECK(code_of([&] {
          parse_params<Rational>(g, R"({"lambda": [[1, 2, 1]], "omega2": [1, 2, 3], "omega3": [0, 0, 0]})");
        }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] {
          parse_params<Rational>(g, R"({"lambda": [[1, 2, 1], [3, 2, 1], [1, 3, 1]], "omega2": [1, 2, 3], "omega3": [0, 0, 0]})");
        }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] {
          parse_params<Rational>(g, R"({"lambda": [[1, 2, 1], [3, 2, 1]], "omega2": [1, 2], "omega3": [0, 0, 0]})");
        }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("matrix spec files") {
  MatrixSpec spec = parse_spec(R"({"rows": ["empty", 2, 3], "cols": [[1, 3], [2, 2], [2, 3]]})");
  CHECK(spec == MatrixSpec{{{}, {1}, {2}}, {{0, 2}, {1, 1}, {1, 2}}});
  for (const Builtin& b : builtins()) CHECK(parse_spec(spec_to_json(b.spec)) == b.spec);
  CHECK(code_of([] { parse_spec(R"({"rows": ["none"], "cols": [[1]]})"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_spec(R"({"rows": [1]})"); }) == ErrorCode::ParseError);
}
