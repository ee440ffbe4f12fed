#pragma once

// Reference computations used only by the tests.  They deliberately avoid
// the library's algorithms: paths are found by plain DFS, inverses by dense
// Gauss-Jordan, determinants by the Leibniz formula.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Edges = std::vector<std::pair<int, int>>;
using Path = std::vector<int>;  // vertex sequence, first entry is the start

inline std::vector<std::vector<int>> children(int n, const Edges& edges) {
  std::vector<std::vector<int>> ch(n);
  for (auto [t, h] : edges) ch[t].push_back(h);
  return ch;
}

/// Every directed path from `from` to `to` in an acyclic graph.
inline std::vector<Path> all_paths(int n, const Edges& edges, int from, int to) {
  auto ch = children(n, edges);
  std::vector<Path> out;
  Path cur{from};
  auto dfs = [&](auto&& self, int v) -> void {
    if (v == to) out.push_back(cur);
    for (int c : ch[v]) {
      cur.push_back(c);
      self(self, c);
      cur.pop_back();
    }
  };
  dfs(dfs, from);
  return out;
}

struct BruteTrek {
  int top;
  std::vector<Path> paths;
};

/// Simple treks by brute force: all path tuples from a common top whose
/// vertex sets intersect exactly in {top}.
inline std::vector<BruteTrek> simple_treks(int n, const Edges& edges, const std::vector<int>& sinks) {
  std::vector<BruteTrek> out;
  for (int top = 0; top < n; ++top) {
    std::vector<std::vector<Path>> options;
    for (int s : sinks) options.push_back(all_paths(n, edges, top, s));
    std::vector<std::size_t> pick(sinks.size(), 0);
    if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) continue;
    for (;;) {
      std::set<int> common(options[0][pick[0]].begin(), options[0][pick[0]].end());
      for (std::size_t r = 1; r < sinks.size(); ++r) {
        std::set<int> next;
        for (int v : options[r][pick[r]])
          if (common.count(v)) next.insert(v);
        common = next;
      }
      if (common == std::set<int>{top}) {
        BruteTrek t{top, {}};
        for (std::size_t r = 0; r < sinks.size(); ++r) t.paths.push_back(options[r][pick[r]]);
        out.push_back(t);
      }
      std::size_t r = 0;
      while (r < pick.size() && ++pick[r] == options[r].size()) pick[r++] = 0;
      if (r == pick.size()) break;
    }
  }
  return out;
}

/// For a polytree: does the undirected path between i and j avoid colliders?
inline bool collider_free(int n, const Edges& edges, int i, int j) {
  std::vector<std::vector<std::pair<int, bool>>> adj(n);  // (neighbour, edge points towards neighbour)
  for (auto [t, h] : edges) {
    adj[t].push_back({h, true});
    adj[h].push_back({t, false});
  }
  std::vector<int> prev(n, -1);
  std::vector<bool> towards(n, false), seen(n, false);
  std::vector<int> stack{i};
  seen[i] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [w, fwd] : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        prev[w] = v;
        towards[w] = fwd;
        stack.push_back(w);
      }
  }
  if (!seen[j]) return false;
  // walk j -> i; a collider is a vertex entered by edges from both sides
  std::vector<bool> dir;  // direction of each step along i -> j
  for (int v = j; v != i; v = prev[v]) dir.push_back(towards[v]);
  std::reverse(dir.begin(), dir.end());
  for (std::size_t s = 0; s + 1 < dir.size(); ++s)
    if (dir[s] && !dir[s + 1]) return false;
  return true;
}

using Dense = std::vector<std::vector<Q>>;

inline std::optional<Dense> inverse(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<Q>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Q d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r)
      if (r != c && a[r][c] != 0) {
        Q f = a[r][c];
        for (std::size_t k = 0; k < n; ++k) {
          a[r][k] -= f * a[c][k];
          inv[r][k] -= f * inv[c][k];
        }
      }
  }
  return inv;
}

struct Moments {
  Dense s;
  std::map<std::vector<int>, Q> t;  // sorted triples
};

/// Moments of X = (I - Lambda)^{-T} eps with independent errors, computed
/// with dense inverses and a plain quadruple sum.
inline std::optional<Moments> moments(int n, const Edges& edges, const std::vector<Q>& lambda,
                                      const std::vector<Q>& w2, const std::vector<Q>& w3) {
  Dense m(n, std::vector<Q>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (std::size_t e = 0; e < edges.size(); ++e) m[edges[e].first][edges[e].second] -= lambda[e];
  auto b = inverse(m);
  if (!b) return std::nullopt;
  Moments out;
  out.s.assign(n, std::vector<Q>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) out.s[i][j] += (*b)[a][i] * w2[a] * (*b)[a][j];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Q acc = 0;
        for (int a = 0; a < n; ++a) acc += w3[a] * (*b)[a][i] * (*b)[a][j] * (*b)[a][k];
        out.t[{i, j, k}] = acc;
      }
  return out;
}

inline Q leibniz_det(const Dense& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Q det = 0;
  do {
    int sign = 1;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (p[x] > p[y]) sign = -sign;
    Q prod = sign;
    for (std::size_t r = 0; r < n; ++r) prod *= a[r][p[r]];
    det += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

/// Sylvester's criterion through Leibniz determinants.
inline bool positive_definite(const Dense& a) {
  for (std::size_t k = 1; k <= a.size(); ++k) {
    Dense sub(k, std::vector<Q>(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) sub[r][c] = a[r][c];
    if (leibniz_det(sub) <= 0) return false;
  }
  return true;
}

/// Rank by dense elimination.
inline std::size_t rank(Dense a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t x = r + 1; x < a.size(); ++x)
      if (a[x][c] != 0) {
        Q f = a[x][c] / a[r][c];
        for (std::size_t k = c; k < cols; ++k) a[x][k] -= f * a[r][k];
      }
    ++r;
  }
  return r;
}

/// max c.x over {x : A x >= b (rows flagged equal use =)} by enumerating
/// basic solutions; nullopt if infeasible.  Only for tiny dimensions and
/// bounded feasible regions.
inline std::optional<Q> lp_by_vertices(const Dense& a, const std::vector<Q>& b, const std::vector<bool>& equal,
                                       const std::vector<Q>& c) {
  const std::size_t m = a.size(), d = c.size();
  std::optional<Q> best;
  std::vector<int> choose(m, 0);
  std::fill(choose.begin(), choose.begin() + static_cast<long>(std::min(d, m)), 1);
  do {
    Dense sys;
    std::vector<Q> rhs;
    for (std::size_t r = 0; r < m; ++r)
      if (choose[r]) {
        sys.push_back(a[r]);
        rhs.push_back(b[r]);
      }
    // must contain every equality row
    bool ok = true;
    for (std::size_t r = 0; r < m; ++r)
      if (equal[r] && !choose[r]) ok = false;
    if (!ok || sys.size() != d) continue;
    auto inv = inverse(sys);
    if (!inv) continue;
    std::vector<Q> x(d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) x[i] += (*inv)[i][k] * rhs[k];
    for (std::size_t r = 0; r < m && ok; ++r) {
      Q lhs = 0;
      for (std::size_t k = 0; k < d; ++k) lhs += a[r][k] * x[k];
      ok = equal[r] ? lhs == b[r] : lhs >= b[r];
    }
    if (!ok) continue;
    Q val = 0;
    for (std::size_t k = 0; k < d; ++k) val += c[k] * x[k];
    if (!best || val > *best) best = val;
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return best;
}

}  // namespace oracle
