#include "treksem/trekmat.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "treksem/error.hpp"

namespace treksem {

TrekTable::TrekTable(const DirectedGraph& g) : g_(g), index_(g.size()) {
  require_forest(g);
  treks_.resize(index_.size());
  for (std::size_t id = 0; id < index_.size(); ++id) {
    std::vector<Trek> found = enumerate_simple_treks(g, index_.variable(id).indices());
    if (!found.empty()) treks_[id] = std::move(found.front());
  }
}

std::optional<Vertex> TrekTable::top(const MomentVariable& v) const {
  const auto& t = trek(v);
  if (!t) return std::nullopt;
  return t->top;
}

std::strong_ordering compare_vars(const MomentVariable& u, const MomentVariable& v, const TrekTable& table) {
  const auto& tu = table.trek(u);
  const auto& tv = table.trek(v);
  if (!tu || !tv)
    throw Error(ErrorCode::NoTrek, variable_name(tu ? v : u, table.size()) + " has no trek");
  if (auto c = u.order() <=> v.order(); c != 0) return c;
  if (auto c = tu->top <=> tv->top; c != 0) return c;
  auto pu = tu->paths, pv = tv->paths;
  std::sort(pu.begin(), pu.end());
  std::sort(pv.begin(), pv.end());
  if (auto c = pu <=> pv; c != 0) return c;
  return u <=> v;
}

std::vector<MomentVariable> linear_generators(const TrekTable& table) {
  std::vector<MomentVariable> out;
  for (const MomentVariable& v : table.variables().all())
    if (!table.has_trek(v)) out.push_back(v);
  return out;
}

std::vector<MomentVariable> linear_generators(const DirectedGraph& g) { return linear_generators(TrekTable(g)); }

ColumnLabel ColumnLabel::from_indices(std::span<const Vertex> idx) {
  if (idx.size() == 1) return vertex(idx[0]);
  if (idx.size() == 2) return pair(idx[0], idx[1]);
  throw Error(ErrorCode::InvalidArgument, "a column label has 1 or 2 vertices");
}

std::string column_name(const ColumnLabel& c, int n) {
  std::string out;
  if (n <= 9) {
    for (Vertex v : c.indices()) out += std::to_string(v + 1);
    return out;
  }
  out = "(";
  for (Vertex v : c.indices()) out += (out.size() > 1 ? "," : "") + std::to_string(v + 1);
  return out + ")";
}

MomentVariable combine(Vertex row, const ColumnLabel& col) {
  if (col.arity == 1) return MomentVariable::cov(row, col.l);
  return MomentVariable::third(row, col.l, col.m);
}

TrekMatrix trek_matrix(const TrekTable& table, Vertex i, Vertex j) {
  const int n = table.size();
  if (i < 0 || i >= n || j < 0 || j >= n) throw Error(ErrorCode::InvalidArgument, "row vertex outside the graph");
  if (i == j) throw Error(ErrorCode::InvalidArgument, "trek matrix needs two distinct vertices");
  if (i > j) std::swap(i, j);
  if (!table.top(i, j))
    throw Error(ErrorCode::NoTrek, "no 2-trek between " + std::to_string(i + 1) + " and " + std::to_string(j + 1));
  TrekMatrix m{i, j, {}};
  auto same_top = [&](const ColumnLabel& c) {
    auto a = table.top(combine(i, c));
    auto b = table.top(combine(j, c));
    return a && b && *a == *b;
  };
  for (Vertex k = 0; k < n; ++k)
    if (same_top(ColumnLabel::vertex(k))) m.columns.push_back(ColumnLabel::vertex(k));
  for (Vertex l = 0; l < n; ++l)
    for (Vertex r = l; r < n; ++r)
      if (same_top(ColumnLabel::pair(l, r))) m.columns.push_back(ColumnLabel::pair(l, r));
  return m;
}

TrekMatrix trek_matrix(const DirectedGraph& g, Vertex i, Vertex j) { return trek_matrix(TrekTable(g), i, j); }

std::vector<Quadric> two_minors(const TrekMatrix& m) {
  std::vector<Quadric> out;
  for (std::size_t c = 0; c < m.columns.size(); ++c)
    for (std::size_t d = c + 1; d < m.columns.size(); ++d) {
      Monomial diag{m.entry(0, c), m.entry(1, d)};
      Monomial anti{m.entry(0, d), m.entry(1, c)};
      // distinct labels give distinct entries, so a minor is never zero
      out.push_back(Quadric{Binomial(std::move(diag), std::move(anti)), {m.i, m.j, m.columns[c], m.columns[d]}});
    }
  return out;
}

void add_minors(GeneratorSet& gens, std::map<Binomial, std::size_t>& seen, const TrekMatrix& m) {
  for (Quadric& q : two_minors(m)) {
    if (seen.count(q.binomial)) continue;
    seen.emplace(q.binomial, gens.quadrics.size());
    gens.quadrics.push_back(std::move(q));
  }
}

GeneratorSet edge_generator_set(const DirectedGraph& g) {
  TrekTable table(g);
  GeneratorSet gens;
  gens.n = g.size();
  gens.linear = linear_generators(table);
  std::map<Binomial, std::size_t> seen;
  for (const Edge& e : g.edges()) add_minors(gens, seen, trek_matrix(table, e.tail, e.head));
  return gens;
}

GeneratorSet full_generator_set(const DirectedGraph& g) {
  TrekTable table(g);
  GeneratorSet gens;
  gens.n = g.size();
  gens.linear = linear_generators(table);
  std::map<Binomial, std::size_t> seen;
  for (Vertex i = 0; i < g.size(); ++i)
    for (Vertex j = i + 1; j < g.size(); ++j)
      if (table.top(i, j)) add_minors(gens, seen, trek_matrix(table, i, j));
  return gens;
}

namespace {

// a + f * b for sorted sparse vectors
SpanBasis::Vector axpy(const SpanBasis::Vector& a, const Rational& f, const SpanBasis::Vector& b) {
  SpanBasis::Vector out;
  out.reserve(a.size() + b.size());
  std::size_t x = 0, y = 0;
  while (x < a.size() || y < b.size()) {
    if (y == b.size() || (x < a.size() && a[x].first < b[y].first)) {
      out.push_back(a[x++]);
    } else if (x == a.size() || b[y].first < a[x].first) {
      out.emplace_back(b[y].first, f * b[y].second);
      ++y;
    } else {
      Rational v = a[x].second + f * b[y].second;
      if (sgn(v) != 0) out.emplace_back(a[x].first, std::move(v));
      ++x;
      ++y;
    }
  }
  return out;
}

}  // namespace

SpanBasis::Vector SpanBasis::reduce(Vector v) const {
  std::size_t p = 0;
  while (p < v.size()) {
    auto it = rows_.find(v[p].first);
    if (it == rows_.end()) {
      ++p;
      continue;
    }
    Rational f = -v[p].second;
    v = axpy(v, f, it->second);
  }
  return v;
}

bool SpanBasis::insert(Vector v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  Rational lead = v.front().second;
  for (auto& [c, x] : v) x /= lead;
  std::size_t pivot = v.front().first;
  rows_.emplace(pivot, std::move(v));
  return true;
}

bool SpanBasis::contains(Vector v) const { return reduce(std::move(v)).empty(); }

std::size_t MonomialCoordinates::id(const Monomial& m) {
  auto [it, fresh] = ids_.emplace(m, ids_.size());
  return it->second;
}

std::optional<std::size_t> MonomialCoordinates::find(const Monomial& m) const {
  auto it = ids_.find(m);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

SpanBasis::Vector MonomialCoordinates::vector(const Binomial& b) {
  std::size_t x = id(b.lhs()), y = id(b.rhs());
  if (x < y) return {{x, Rational(1)}, {y, Rational(-1)}};
  return {{y, Rational(-1)}, {x, Rational(1)}};
}

std::size_t degree2_span_rank(const std::vector<Binomial>& quadrics) {
  MonomialCoordinates coords;
  SpanBasis basis;
  for (const Binomial& b : quadrics) basis.insert(coords.vector(b));
  return basis.rank();
}

std::size_t degree2_span_rank(const GeneratorSet& gens) {
  std::vector<Binomial> q;
  for (const Quadric& x : gens.quadrics) q.push_back(x.binomial);
  return degree2_span_rank(q);
}

std::string_view to_string(DecompositionStatus s) {
  switch (s) {
    case DecompositionStatus::Decomposed: return "decomposed";
    case DecompositionStatus::NotInIdeal: return "not-in-ideal";
    case DecompositionStatus::ViaLinearGenerators: return "via-linear-generators";
    case DecompositionStatus::NoShortDecomposition: return "no-short-decomposition";
  }
  return "unknown";
}

std::optional<std::vector<int>> image_exponents(const TrekTable& table, const Monomial& m) {
  const int n = table.size();
  std::vector<int> e(2 * n + table.graph().num_edges(), 0);
  for (const MomentVariable& v : m.variables()) {
    const auto& t = table.trek(v);
    if (!t) return std::nullopt;
    ++e[(v.is_cov() ? 0 : n) + t->top];
    std::vector<int> mult = t->edge_multiplicities(table.graph());
    for (std::size_t k = 0; k < mult.size(); ++k) e[2 * n + k] += mult[k];
  }
  return e;
}

namespace {

std::vector<Vertex> without_one(std::span<const Vertex> idx, Vertex x) {
  std::vector<Vertex> out(idx.begin(), idx.end());
  out.erase(std::find(out.begin(), out.end(), x));
  return out;
}

// Monomials reachable from u*v by one minor of some trek matrix: swap the
// column parts of u = i + c and v = j + d to get (i + d)(j + c).
std::vector<std::pair<Monomial, QuadricSource>> minor_moves(const TrekTable& table, const Monomial& mono) {
  std::vector<std::pair<Monomial, QuadricSource>> out;
  const MomentVariable& u = mono.variables()[0];
  const MomentVariable& v = mono.variables()[1];
  std::set<Vertex> iu(u.indices().begin(), u.indices().end());
  std::set<Vertex> iv(v.indices().begin(), v.indices().end());
  for (Vertex i : iu)
    for (Vertex j : iv) {
      if (i == j || !table.top(i, j)) continue;
      std::vector<Vertex> c = without_one(u.indices(), i), d = without_one(v.indices(), j);
      if (c == d) continue;
      ColumnLabel cl = ColumnLabel::from_indices(c), dl = ColumnLabel::from_indices(d);
      auto ok = [&](const ColumnLabel& col) {
        auto a = table.top(combine(i, col));
        auto b = table.top(combine(j, col));
        return a && b && *a == *b;
      };
      if (!ok(cl) || !ok(dl)) continue;
      QuadricSource src{std::min(i, j), std::max(i, j), std::min(cl, dl), std::max(cl, dl)};
      out.emplace_back(Monomial{combine(i, dl), combine(j, cl)}, src);
    }
  return out;
}

}  // namespace

Decomposition decompose_binomial(const TrekTable& table, const Binomial& f) {
  if (f.degree() != 2 || f.rhs().degree() != 2)
    throw Error(ErrorCode::InvalidArgument, "decomposition needs a quadratic binomial");
  Decomposition out;
  auto el = image_exponents(table, f.lhs());
  auto er = image_exponents(table, f.rhs());
  if (!el && !er) {
    out.status = DecompositionStatus::ViaLinearGenerators;
    return out;
  }
  if (!el || !er || *el != *er) {
    out.status = DecompositionStatus::NotInIdeal;
    return out;
  }
  auto first = minor_moves(table, f.lhs());
  for (const auto& [m1, s1] : first)
    if (m1 == f.rhs()) {
      out.status = DecompositionStatus::Decomposed;
      out.steps = {{f.lhs(), f.rhs(), s1}};
      return out;
    }
  for (const auto& [m1, s1] : first)
    for (const auto& [m2, s2] : minor_moves(table, m1))
      if (m2 == f.rhs()) {
        out.status = DecompositionStatus::Decomposed;
        out.steps = {{f.lhs(), m1, s1}, {m1, f.rhs(), s2}};
        return out;
      }
  out.status = DecompositionStatus::NoShortDecomposition;
  return out;
}

EmitFormat parse_emit_format(std::string_view name) {
  if (name == "plain") return EmitFormat::Plain;
  if (name == "macaulay2" || name == "m2") return EmitFormat::Macaulay2;
  if (name == "json") return EmitFormat::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

json variable_json(const MomentVariable& v) {
  json a = json::array();
  for (Vertex i : v.indices()) a.push_back(i + 1);
  return a;
}

json monomial_json(const Monomial& m) {
  json a = json::array();
  for (const MomentVariable& v : m.variables()) a.push_back(variable_json(v));
  return a;
}

json column_json(const ColumnLabel& c) {
  json a = json::array();
  for (Vertex v : c.indices()) a.push_back(v + 1);
  return a;
}

std::string emit_plain(const GeneratorSet& gens) {
  std::string out;
  for (const MomentVariable& v : gens.linear) out += variable_name(v, gens.n) + '\n';
  for (const Quadric& q : gens.quadrics) out += binomial_name(q.binomial, gens.n) + '\n';
  if (out.empty()) out = "0\n";
  return out;
}

std::string emit_macaulay2(const GeneratorSet& gens) {
  VariableIndex index(std::max(gens.n, 1));
  std::ostringstream os;
  os << "R = QQ[";
  for (std::size_t k = 0; k < index.size(); ++k) os << (k ? ", " : "") << variable_name(index.variable(k), gens.n);
  os << "];\n";
  std::vector<std::string> items;
  for (const MomentVariable& v : gens.linear) items.push_back(variable_name(v, gens.n));
  for (const Quadric& q : gens.quadrics) items.push_back(binomial_name(q.binomial, gens.n));
  if (items.empty()) {
    os << "I = ideal(0_R);\n";
    return os.str();
  }
  os << "I = ideal(\n";
  for (std::size_t k = 0; k < items.size(); ++k) os << "  " << items[k] << (k + 1 < items.size() ? ",\n" : "\n");
  os << ");\n";
  return os.str();
}

std::string emit_json(const GeneratorSet& gens) {
  json doc;
  doc["n"] = gens.n;
  doc["linear_source"] = gens.linear_source;
  doc["linear"] = json::array();
  for (const MomentVariable& v : gens.linear) doc["linear"].push_back(variable_json(v));
  doc["quadrics"] = json::array();
  for (const Quadric& q : gens.quadrics) {
    json src;
    src["matrix"] = {q.source.i + 1, q.source.j + 1};
    src["columns"] = {column_json(q.source.c), column_json(q.source.d)};
    doc["quadrics"].push_back(
        {{"lhs", monomial_json(q.binomial.lhs())}, {"rhs", monomial_json(q.binomial.rhs())}, {"source", src}});
  }
  return doc.dump(1) + '\n';
}

std::vector<Vertex> read_indices(const json& a, int n, std::size_t lo, std::size_t hi, const char* what) {
  if (!a.is_array() || a.size() < lo || a.size() > hi)
    throw Error(ErrorCode::ParseError, std::string("malformed ") + what);
  std::vector<Vertex> out;
  for (const json& x : a) {
    if (!x.is_number_integer()) throw Error(ErrorCode::ParseError, std::string("non-integer index in ") + what);
    int v = x.get<int>();
    if (v < 1 || v > n) throw Error(ErrorCode::ParseError, std::string("index out of range in ") + what);
    out.push_back(v - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Monomial read_monomial(const json& a, int n) {
  if (!a.is_array()) throw Error(ErrorCode::ParseError, "monomial must be an array of variables");
  std::vector<MomentVariable> vars;
  for (const json& v : a) vars.push_back(MomentVariable::from_indices(read_indices(v, n, 2, 3, "variable")));
  return Monomial(std::move(vars));
}

}  // namespace

std::string emit(const GeneratorSet& gens, EmitFormat format) {
  switch (format) {
    case EmitFormat::Plain: return emit_plain(gens);
    case EmitFormat::Macaulay2: return emit_macaulay2(gens);
    case EmitFormat::Json: return emit_json(gens);
  }
  return {};
}

GeneratorSet parse_generator_set(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    GeneratorSet gens;
    gens.n = doc.at("n").get<int>();
    if (gens.n < 0) throw Error(ErrorCode::ParseError, "negative vertex count");
    if (doc.contains("linear_source")) gens.linear_source = doc["linear_source"].get<std::string>();
    for (const json& v : doc.at("linear"))
      gens.linear.push_back(MomentVariable::from_indices(read_indices(v, gens.n, 2, 3, "linear generator")));
    for (const json& q : doc.at("quadrics")) {
      Monomial lhs = read_monomial(q.at("lhs"), gens.n);
      Monomial rhs = read_monomial(q.at("rhs"), gens.n);
      if (lhs == rhs) throw Error(ErrorCode::ParseError, "quadric with equal sides");
      Quadric out{Binomial(lhs, rhs), {}};
      if (q.contains("source")) {
        const json& s = q["source"];
        std::vector<Vertex> ij = read_indices(s.at("matrix"), gens.n, 2, 2, "source matrix");
        const json& cols = s.at("columns");
        if (!cols.is_array() || cols.size() != 2) throw Error(ErrorCode::ParseError, "source needs two columns");
        out.source = {ij[0], ij[1], ColumnLabel::from_indices(read_indices(cols[0], gens.n, 1, 2, "column")),
                      ColumnLabel::from_indices(read_indices(cols[1], gens.n, 1, 2, "column"))};
      }
      gens.quadrics.push_back(std::move(out));
    }
    return gens;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace treksem
