#include "treksem/polytope.hpp"

#include <random>
#include <string>

#include "treksem/error.hpp"

namespace treksem {

std::vector<Rational> ExponentVector::point() const {
  std::vector<Rational> p;
  for (int v : z) p.emplace_back(v);
  for (int v : y) p.emplace_back(v);
  return p;
}

ExponentVector exponent_vector(const TrekTable& table, Vertex i, Vertex j, Vertex k) {
  MomentVariable v = MomentVariable::third(i, j, k);
  const auto& t = table.trek(v);
  if (!t)
    throw Error(ErrorCode::NoTrek, "no 3-trek between " + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                       " and " + std::to_string(k + 1));
  ExponentVector e;
  e.sinks = {v[0], v[1], v[2]};
  e.z.assign(table.size(), 0);
  e.z[t->top] = 1;
  e.y = t->edge_multiplicities(table.graph());
  return e;
}

ExponentVector exponent_vector(const DirectedGraph& g, Vertex i, Vertex j, Vertex k) {
  return exponent_vector(TrekTable(g), i, j, k);
}

std::vector<ExponentVector> vertex_set(const DirectedGraph& g) {
  GraphClass c = classify(g);
  if (c == GraphClass::Polyforest)
    throw Error(ErrorCode::Disconnected, "the moment polytope is only built for connected polytrees");
  require_forest(g);
  TrekTable table(g);
  std::vector<ExponentVector> out;
  for (Vertex i = 0; i < g.size(); ++i)
    for (Vertex j = i; j < g.size(); ++j)
      for (Vertex k = j; k < g.size(); ++k)
        if (table.top(i, j, k)) out.push_back(exponent_vector(table, i, j, k));
  return out;
}

std::string_view to_string(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::ZNonnegative: return "z-nonnegative";
    case ConstraintFamily::YNonnegative: return "y-nonnegative";
    case ConstraintFamily::ZSum: return "z-sum";
    case ConstraintFamily::Edge: return "edge";
    case ConstraintFamily::Vertex: return "vertex";
  }
  return "unknown";
}

std::vector<LinearConstraint> HRep::linear() const {
  std::vector<LinearConstraint> out;
  for (const auto& c : constraints) out.push_back(c.constraint);
  return out;
}

HRep h_rep(const DirectedGraph& g) {
  require_forest(g);
  const int n = g.size();
  const std::size_t ne = g.num_edges();
  HRep h{n, ne, {}};
  const std::size_t dim = h.dim();
  auto blank = [&] { return std::vector<Rational>(dim, Rational(0)); };
  auto z = [](Vertex v) { return static_cast<std::size_t>(v); };
  auto y = [&](Vertex tail, Vertex head) { return static_cast<std::size_t>(n) + *g.edge_index(tail, head); };

  for (Vertex l = 0; l < n; ++l) {
    auto c = blank();
    c[z(l)] = 1;
    h.constraints.push_back({{c, Relation::GreaterEqual, 0}, ConstraintFamily::ZNonnegative, l});
  }
  for (std::size_t e = 0; e < ne; ++e) {
    auto c = blank();
    c[n + e] = 1;
    h.constraints.push_back({{c, Relation::GreaterEqual, 0}, ConstraintFamily::YNonnegative, static_cast<int>(e)});
  }
  {
    auto c = blank();
    for (Vertex l = 0; l < n; ++l) c[z(l)] = 1;
    h.constraints.push_back({{c, Relation::Equal, 1}, ConstraintFamily::ZSum, -1});
  }
  for (std::size_t e = 0; e < ne; ++e) {
    Vertex l = g.edges()[e].tail;
    auto c = blank();
    c[z(l)] = 2;
    for (Vertex p : g.parents(l)) c[y(p, l)] += 1;
    c[n + e] -= 1;
    h.constraints.push_back({{c, Relation::GreaterEqual, 0}, ConstraintFamily::Edge, static_cast<int>(e)});
  }
  for (Vertex l = 0; l < n; ++l) {
    auto c = blank();
    c[z(l)] = 3;
    for (Vertex p : g.parents(l)) c[y(p, l)] += 1;
    for (Vertex m : g.children(l)) c[y(l, m)] -= 1;
    h.constraints.push_back({{c, Relation::GreaterEqual, 0}, ConstraintFamily::Vertex, l});
  }
  return h;
}

std::string format_constraint(const HConstraint& hc, const DirectedGraph& g) {
  const int n = g.size();
  auto label = [&](std::size_t k) {
    if (k < static_cast<std::size_t>(n)) return "z_" + std::to_string(k + 1);
    const Edge& e = g.edges()[k - n];
    if (n <= 9) return "y_" + std::to_string(e.tail + 1) + std::to_string(e.head + 1);
    return "y_(" + std::to_string(e.tail + 1) + "," + std::to_string(e.head + 1) + ")";
  };
  std::string out;
  const auto& c = hc.constraint;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    int s = sgn(c.coeffs[k]);
    if (s == 0) continue;
    Rational a = abs(c.coeffs[k]);
    if (out.empty())
      out += s < 0 ? "-" : "";
    else
      out += s < 0 ? " - " : " + ";
    if (a != 1) out += format_rational(a);
    out += label(k);
  }
  if (out.empty()) out = "0";
  out += c.relation == Relation::Equal ? " = " : " >= ";
  return out + format_rational(c.rhs);
}

bool point_in_h(const HRep& h, const std::vector<Rational>& point) {
  if (point.size() != h.dim())
    throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(point.size()) + " coordinates, expected " +
                                                  std::to_string(h.dim()));
  for (const auto& hc : h.constraints) {
    const auto& c = hc.constraint;
    Rational lhs = 0;
    for (std::size_t k = 0; k < point.size(); ++k)
      if (sgn(c.coeffs[k]) != 0) lhs += c.coeffs[k] * point[k];
    if (c.relation == Relation::Equal ? lhs != c.rhs : lhs < c.rhs) return false;
  }
  return true;
}

LpSolution lp_maximize(const HRep& h, const std::vector<Rational>& objective) {
  return ExactSimplex(h.dim(), h.linear()).maximize(objective);
}

VhReport compare_vh(const HRep& h, const std::vector<ExponentVector>& vertices,
                    const std::vector<std::vector<Rational>>& objectives) {
  VhReport report;
  report.num_vertices = vertices.size();
  std::vector<std::vector<Rational>> points;
  for (const auto& v : vertices) {
    points.push_back(v.point());
    if (!point_in_h(h, points.back())) report.outside_h.push_back(v);
  }
  ExactSimplex lp(h.dim(), h.linear());
  for (const auto& c : objectives) {
    ++report.trials;
    Rational best;
    for (std::size_t p = 0; p < points.size(); ++p) {
      Rational val = 0;
      for (std::size_t k = 0; k < c.size(); ++k)
        if (sgn(c[k]) != 0 && sgn(points[p][k]) != 0) val += c[k] * points[p][k];
      if (p == 0 || val > best) best = val;
    }
    Rational opt;
    try {
      opt = lp.maximize(c).optimum;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unbounded) throw;
      report.discrepancies.push_back({c, Rational(0), best, true});
      continue;
    }
    if (opt != best) report.discrepancies.push_back({c, opt, best});
  }
  return report;
}

VhReport check_vh_equality(const DirectedGraph& g, std::size_t trials, std::uint64_t seed) {
  HRep h = h_rep(g);
  std::vector<ExponentVector> vertices = vertex_set(g);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Rational>> objectives(trials);
  for (auto& c : objectives)
    for (std::size_t k = 0; k < h.dim(); ++k) c.emplace_back(static_cast<long>(rng() % 19) - 9);
  return compare_vh(h, vertices, objectives);
}

}  // namespace treksem
