#include "treksem/io.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include <json.hpp>

#include "treksem/error.hpp"

namespace treksem {

using nlohmann::json;

namespace {

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ParseError, field + ": " + why);
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object()) bad_field("document", "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) bad_field(key, "missing");
  return *it;
}

int read_count(const json& doc) {
  const json& n = require(doc, "n");
  if (!n.is_number_integer() || n.get<long>() < 0 || n.get<long>() > 1000) bad_field("n", "expected a vertex count");
  return n.get<int>();
}

Vertex read_vertex(const json& x, int n, const std::string& field) {
  if (!x.is_number_integer()) bad_field(field, "expected an integer vertex label");
  long v = x.get<long>();
  if (v < 1 || v > n) bad_field(field, "vertex " + std::to_string(v) + " outside 1.." + std::to_string(n));
  return static_cast<Vertex>(v - 1);
}

template <class Scalar>
Scalar read_value(const json& x, const std::string& field) {
  if (x.is_string()) {
    try {
      return ScalarTraits<Scalar>::from_rational(parse_rational(x.get<std::string>()));
    } catch (const Error& e) {
      bad_field(field, e.what());
    }
  }
  if (x.is_number_integer()) return ScalarTraits<Scalar>::from_int(x.get<long>());
  if constexpr (ScalarTraits<Scalar>::kind == ScalarKind::Float) {
    if (x.is_number_float()) return x.get<double>();
  } else {
    if (x.is_number_float()) bad_field(field, "exact mode needs an integer or a \"p/q\" string");
  }
  bad_field(field, "expected a number");
}

template <class Scalar>
json write_value(const Scalar& v) {
  if constexpr (ScalarTraits<Scalar>::kind == ScalarKind::Exact)
    return format_rational(v);
  else
    return v;
}

std::string dump(const json& doc) { return doc.dump(1) + '\n'; }

}  // namespace

std::string graph_to_json(const DirectedGraph& g) {
  json doc;
  doc["n"] = g.size();
  doc["edges"] = json::array();
  for (const Edge& e : g.edges()) doc["edges"].push_back({e.tail + 1, e.head + 1});
  return dump(doc);
}

DirectedGraph parse_graph(std::string_view text) {
  json doc = parse_document(text);
  int n = read_count(doc);
  const json& edges = require(doc, "edges");
  if (!edges.is_array()) bad_field("edges", "expected an array");
  std::vector<Edge> out;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    std::string field = "edges[" + std::to_string(k) + "]";
    const json& e = edges[k];
    if (!e.is_array() || e.size() != 2) bad_field(field, "expected [tail, head]");
    out.push_back({read_vertex(e[0], n, field), read_vertex(e[1], n, field)});
  }
  return DirectedGraph(n, std::move(out));
}

template <class Scalar>
std::string moments_to_json(const MomentData<Scalar>& m) {
  const int n = m.size();
  json doc;
  doc["n"] = n;
  doc["S"] = json::array();
  doc["T"] = json::array();
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j) doc["S"].push_back({i + 1, j + 1, write_value(m.cov.at(i, j))});
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j)
      for (Vertex k = j; k < n; ++k) doc["T"].push_back({i + 1, j + 1, k + 1, write_value(m.third.at(i, j, k))});
  return dump(doc);
}

template <class Scalar>
MomentData<Scalar> parse_moments(std::string_view text) {
  json doc = parse_document(text);
  const int n = read_count(doc);
  MomentData<Scalar> m(n);
  std::map<MomentVariable, Scalar> seen;
  auto read_block = [&](const char* key, std::size_t order) {
    if (!doc.contains(key)) return;
    const json& block = doc[key];
    if (!block.is_array()) bad_field(key, "expected an array");
    for (std::size_t r = 0; r < block.size(); ++r) {
      std::string field = std::string(key) + "[" + std::to_string(r) + "]";
      const json& e = block[r];
      if (!e.is_array() || e.size() != order + 1)
        bad_field(field, order == 2 ? "expected [i, j, value]" : "expected [i, j, k, value]");
      std::vector<Vertex> idx;
      for (std::size_t a = 0; a < order; ++a) idx.push_back(read_vertex(e[a], n, field));
      MomentVariable v = MomentVariable::from_indices(idx);
      Scalar value = read_value<Scalar>(e[order], field);
      auto [it, fresh] = seen.emplace(v, value);
      if (!fresh && !(it->second == value))
        throw Error(ErrorCode::AsymmetricInput, field + ": conflicting value for " + variable_name(v, n));
      m.value(v) = value;
    }
  };
  read_block("S", 2);
  read_block("T", 3);
  return m;
}

template <class Scalar>
std::string params_to_json(const DirectedGraph& g, const ModelParameters<Scalar>& p) {
  if (p.lambda.size() != g.num_edges() || p.omega2.size() != static_cast<std::size_t>(g.size()) ||
      p.omega3.size() != static_cast<std::size_t>(g.size()))
    throw Error(ErrorCode::ShapeMismatch, "parameters do not fit the graph");
  json doc;
  doc["lambda"] = json::array();
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    doc["lambda"].push_back({g.edges()[e].tail + 1, g.edges()[e].head + 1, write_value(p.lambda[e])});
  doc["omega2"] = json::array();
  doc["omega3"] = json::array();
  for (const Scalar& v : p.omega2) doc["omega2"].push_back(write_value(v));
  for (const Scalar& v : p.omega3) doc["omega3"].push_back(write_value(v));
  return dump(doc);
}

template <class Scalar>
ModelParameters<Scalar> parse_params(const DirectedGraph& g, std::string_view text) {
  json doc = parse_document(text);
  const int n = g.size();
  ModelParameters<Scalar> p;
  std::vector<std::optional<Scalar>> lambda(g.num_edges());
  const json& lam = require(doc, "lambda");
  if (!lam.is_array()) bad_field("lambda", "expected an array");
  for (std::size_t r = 0; r < lam.size(); ++r) {
    std::string field = "lambda[" + std::to_string(r) + "]";
    const json& e = lam[r];
    if (!e.is_array() || e.size() != 3) bad_field(field, "expected [tail, head, value]");
    Vertex t = read_vertex(e[0], n, field), h = read_vertex(e[1], n, field);
    auto idx = g.edge_index(t, h);
    if (!idx) throw Error(ErrorCode::ShapeMismatch, field + ": not an edge of the graph");
    if (lambda[*idx]) throw Error(ErrorCode::ShapeMismatch, field + ": edge listed twice");
    lambda[*idx] = read_value<Scalar>(e[2], field);
  }
  for (std::size_t e = 0; e < lambda.size(); ++e) {
    if (!lambda[e])
      throw Error(ErrorCode::ShapeMismatch, "lambda: missing edge " + std::to_string(g.edges()[e].tail + 1) + "->" +
                                                std::to_string(g.edges()[e].head + 1));
    p.lambda.push_back(*lambda[e]);
  }
  auto read_vector = [&](const char* key, std::vector<Scalar>& out) {
    const json& a = require(doc, key);
    if (!a.is_array()) bad_field(key, "expected an array");
    if (a.size() != static_cast<std::size_t>(n))
      throw Error(ErrorCode::ShapeMismatch, std::string(key) + ": expected " + std::to_string(n) + " values");
    for (std::size_t r = 0; r < a.size(); ++r)
      out.push_back(read_value<Scalar>(a[r], std::string(key) + "[" + std::to_string(r) + "]"));
  };
  read_vector("omega2", p.omega2);
  read_vector("omega3", p.omega3);
  return p;
}

std::string spec_to_json(const MatrixSpec& spec) {
  json doc;
  doc["rows"] = json::array();
  for (const auto& r : spec.rows) {
    if (r.empty())
      doc["rows"].push_back("empty");
    else
      doc["rows"].push_back(r[0] + 1);
  }
  doc["cols"] = json::array();
  for (const auto& c : spec.cols) {
    json a = json::array();
    for (Vertex v : c) a.push_back(v + 1);
    doc["cols"].push_back(a);
  }
  return dump(doc);
}

MatrixSpec parse_spec(std::string_view text) {
  json doc = parse_document(text);
  MatrixSpec spec;
  // Labels are only checked for being positive here; validate_spec knows n.
  auto label = [&](const json& x, const std::string& field) {
    if (!x.is_number_integer() || x.get<long>() < 1 || x.get<long>() > 1000)
      bad_field(field, "expected a positive vertex label");
    return static_cast<Vertex>(x.get<long>() - 1);
  };
  const json& rows = require(doc, "rows");
  if (!rows.is_array()) bad_field("rows", "expected an array");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string field = "rows[" + std::to_string(r) + "]";
    if (rows[r].is_string()) {
      if (rows[r].get<std::string>() != "empty") bad_field(field, "expected \"empty\" or a vertex");
      spec.rows.push_back({});
    } else {
      spec.rows.push_back({label(rows[r], field)});
    }
  }
  const json& cols = require(doc, "cols");
  if (!cols.is_array()) bad_field("cols", "expected an array");
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::string field = "cols[" + std::to_string(c) + "]";
    if (!cols[c].is_array() || cols[c].empty() || cols[c].size() > 2) bad_field(field, "expected [k] or [l, m]");
    std::vector<Vertex> col;
    for (const json& x : cols[c]) col.push_back(label(x, field));
    spec.cols.push_back(col);
  }
  return spec;
}

#define TREKSEM_INSTANTIATE(S)                                                                   \
  template std::string moments_to_json(const MomentData<S>&);                                   \
  template MomentData<S> parse_moments<S>(std::string_view);                                    \
  template std::string params_to_json(const DirectedGraph&, const ModelParameters<S>&);         \
  template ModelParameters<S> parse_params<S>(const DirectedGraph&, std::string_view);

TREKSEM_INSTANTIATE(Rational)
TREKSEM_INSTANTIATE(double)

#undef TREKSEM_INSTANTIATE

}  // namespace treksem
