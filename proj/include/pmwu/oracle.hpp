#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "pmwu/errors.hpp"
#include "pmwu/graph.hpp"
#include "pmwu/instance.hpp"

namespace pmwu {

// Exact references for small instances. Everything here is deliberately
// naive; none of it shares code with the solver.

/// Dense LP over x >= 0:  optimize <c,x>  s.t.  row_i: <a_i,x> (<= | >=) b_i.
struct DenseLp {
  enum class Sense { Minimize, Maximize };
  enum class RowSense { Le, Ge };

  std::size_t cols = 0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<RowSense> row_sense;
  std::vector<double> c;
  Sense sense = Sense::Minimize;

  static constexpr std::size_t kMaxRows = 64;
  static constexpr std::size_t kMaxCols = 24;
  /// Hard cap on the number of candidate bases enumerated.
  static constexpr double kMaxBases = 5e7;

  explicit DenseLp(std::size_t n = 0, Sense s = Sense::Minimize) : cols(n), c(n, 1.0), sense(s) {}

  std::size_t rows() const { return a.size(); }

  void add_row(std::vector<double> coeffs, RowSense rs, double rhs) {
    check_dim(coeffs.size(), cols, "DenseLp row");
    a.push_back(std::move(coeffs));
    row_sense.push_back(rs);
    b.push_back(rhs);
  }
};

struct LpSolution {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
  std::size_t bases_tried = 0;
};

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Solves the square system in place by Gaussian elimination with partial
/// pivoting. Returns false if it is (numerically) singular.
inline bool solve_square(std::vector<long double>& m, std::vector<long double>& rhs, std::size_t k) {
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::fabs(m[r * k + col]) > std::fabs(m[piv * k + col])) piv = r;
    }
    if (std::fabs(m[piv * k + col]) < 1e-12L) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < k; ++j) std::swap(m[col * k + j], m[piv * k + j]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const long double f = m[r * k + col] / m[col * k + col];
      if (f == 0.0L) continue;
      for (std::size_t j = col; j < k; ++j) m[r * k + j] -= f * m[col * k + j];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = k; i-- > 0;) {
    long double acc = rhs[i];
    for (std::size_t j = i + 1; j < k; ++j) acc -= m[i * k + j] * rhs[j];
    rhs[i] = acc / m[i * k + i];
  }
  return true;
}

}  // namespace detail

/// Exact optimum by enumerating vertices of {x >= 0, rows}: every choice of
/// n constraints (rows or x_j = 0) made tight, solved, and kept if it
/// satisfies all the others. Requires a finite optimum.
inline LpSolution lp_vertex_enumeration(const DenseLp& lp) {
  const std::size_t R = lp.rows();
  const std::size_t N = lp.cols;
  check_dim(lp.b.size(), R, "DenseLp rhs");
  check_dim(lp.c.size(), N, "DenseLp objective");
  if (R > DenseLp::kMaxRows || N > DenseLp::kMaxCols) {
    throw SizeLimitError("vertex enumeration is limited to " + std::to_string(DenseLp::kMaxRows) + " rows and " +
                         std::to_string(DenseLp::kMaxCols) + " columns");
  }
  if (detail::binomial(R + N, N) > DenseLp::kMaxBases) {
    throw SizeLimitError("vertex enumeration would try more than 5e7 bases");
  }

  LpSolution best;
  const bool maximize = lp.sense == DenseLp::Sense::Maximize;
  if (N == 0) {
    best.feasible = true;
    for (std::size_t r = 0; r < R; ++r) {
      best.feasible = best.feasible && (lp.row_sense[r] == DenseLp::RowSense::Le ? 0.0 <= lp.b[r] : 0.0 >= lp.b[r]);
    }
    best.bases_tried = 1;
    return best;
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (double v : x) {
      if (v < -1e-9) return false;
    }
    for (std::size_t r = 0; r < R; ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < N; ++j) lhs += lp.a[r][j] * x[j];
      const double tol = 1e-9 * std::max(1.0, std::abs(lp.b[r]));
      if (lp.row_sense[r] == DenseLp::RowSense::Le ? lhs > lp.b[r] + tol : lhs < lp.b[r] - tol) return false;
    }
    return true;
  };

  const std::size_t total = R + N;
  std::vector<std::size_t> tight(N);
  std::iota(tight.begin(), tight.end(), 0);
  std::vector<long double> m(N * N), rhs(N);
  std::vector<double> x(N);
  for (;;) {
    ++best.bases_tried;
    for (std::size_t k = 0; k < N; ++k) {
      const std::size_t t = tight[k];
      for (std::size_t j = 0; j < N; ++j) m[k * N + j] = t < R ? lp.a[t][j] : (t - R == j ? 1.0L : 0.0L);
      rhs[k] = t < R ? lp.b[t] : 0.0L;
    }
    if (detail::solve_square(m, rhs, N)) {
      for (std::size_t j = 0; j < N; ++j) x[j] = static_cast<double>(rhs[j]);
      if (feasible(x)) {
        double value = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          x[j] = std::max(0.0, x[j]);
          value += lp.c[j] * x[j];
        }
        if (!best.feasible || (maximize ? value > best.value : value < best.value)) {
          best.feasible = true;
          best.value = value;
          best.x = x;
        }
      }
    }
    // Next combination in lexicographic order.
    std::size_t i = N;
    while (i > 0 && tight[i - 1] == total - N + (i - 1)) --i;
    if (i == 0) break;
    ++tight[i - 1];
    for (std::size_t k = i; k < N; ++k) tight[k] = tight[k - 1] + 1;
  }
  return best;
}

// LPs of the graph problems, built straight from their definitions.

inline DenseLp matching_lp(const Graph& g) {
  DenseLp lp(g.m(), DenseLp::Sense::Maximize);
  for (std::size_t v = 0; v < g.n(); ++v) {
    std::vector<double> row(g.m(), 0.0);
    for (std::size_t e = 0; e < g.m(); ++e) {
      if (g.edge(e).r == v || g.edge(e).c == v) row[e] = 1.0;
    }
    lp.add_row(std::move(row), DenseLp::RowSense::Le, 1.0);
  }
  return lp;
}

inline DenseLp vertex_cover_lp(const Graph& g) {
  DenseLp lp(g.n(), DenseLp::Sense::Minimize);
  for (const auto& e : g.edges()) {
    std::vector<double> row(g.n(), 0.0);
    row[e.r] = row[e.c] = 1.0;
    lp.add_row(std::move(row), DenseLp::RowSense::Ge, 1.0);
  }
  return lp;
}

inline DenseLp dominating_set_lp(const Graph& g) {
  DenseLp lp(g.n(), DenseLp::Sense::Minimize);
  std::vector<std::vector<double>> rows(g.n(), std::vector<double>(g.n(), 0.0));
  for (std::size_t v = 0; v < g.n(); ++v) rows[v][v] = 1.0;
  for (const auto& e : g.edges()) rows[e.r][e.c] = rows[e.c][e.r] = 1.0;
  for (auto& r : rows) lp.add_row(std::move(r), DenseLp::RowSense::Ge, 1.0);
  return lp;
}

namespace detail {
/// Left side of a bipartite graph: the marked partition if present,
/// otherwise a BFS 2-coloring. Throws if the graph is not bipartite.
inline std::vector<std::uint8_t> bipartition(const Graph& g) {
  std::vector<std::uint8_t> side(g.n(), 2);
  if (g.is_marked_bipartite()) {
    for (std::size_t v = 0; v < g.n(); ++v) side[v] = v < g.n_left() ? 0 : 1;
    return side;
  }
  std::vector<std::vector<index_t>> adj(g.n());
  for (const auto& e : g.edges()) {
    adj[e.r].push_back(e.c);
    adj[e.c].push_back(e.r);
  }
  for (std::size_t s = 0; s < g.n(); ++s) {
    if (side[s] != 2) continue;
    side[s] = 0;
    std::queue<index_t> q;
    q.push(static_cast<index_t>(s));
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto w : adj[u]) {
        if (side[w] == 2) {
          side[w] = side[u] ^ 1;
          q.push(w);
        } else if (side[w] == side[u]) {
          throw std::invalid_argument("graph is not bipartite");
        }
      }
    }
  }
  return side;
}
}  // namespace detail

/// Maximum matching cardinality of a bipartite graph.
inline std::size_t hopcroft_karp(const Graph& g) {
  const auto side = detail::bipartition(g);
  const std::size_t n = g.n();
  std::vector<std::vector<index_t>> adj(n);
  for (const auto& e : g.edges()) {
    if (side[e.r] == 0) {
      adj[e.r].push_back(e.c);
    } else {
      adj[e.c].push_back(e.r);
    }
  }
  constexpr index_t kNone = std::numeric_limits<index_t>::max();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<index_t> mate(n, kNone);
  std::vector<std::size_t> dist(n);

  auto bfs = [&] {
    std::queue<index_t> q;
    bool found = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (side[u] != 0) continue;
      if (mate[u] == kNone) {
        dist[u] = 0;
        q.push(static_cast<index_t>(u));
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto v : adj[u]) {
        const auto w = mate[v];
        if (w == kNone) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative DFS along the BFS layering.
  std::vector<std::size_t> next(n);
  auto dfs = [&](index_t root) {
    std::vector<index_t> stack{root};
    while (!stack.empty()) {
      const auto u = stack.back();
      if (next[u] == adj[u].size()) {
        dist[u] = kInf;
        stack.pop_back();
        continue;
      }
      const auto v = adj[u][next[u]];
      const auto w = mate[v];
      if (w == kNone) {
        // Augment along the stack: stack[k] gets matched to its current choice.
        for (std::size_t k = stack.size(); k-- > 0;) {
          const auto a = stack[k];
          const auto b = adj[a][next[a]];
          mate[a] = b;
          mate[b] = a;
        }
        return true;
      }
      if (dist[w] == dist[u] + 1) {
        stack.push_back(w);
      } else {
        ++next[u];
      }
    }
    return false;
  };

  std::size_t size = 0;
  while (bfs()) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t u = 0; u < n; ++u) {
      if (side[u] == 0 && mate[u] == kNone && dfs(static_cast<index_t>(u))) ++size;
    }
  }
  return size;
}

/// max over nonempty S of |E(S)| / |S|.
inline double brute_densest(const Graph& g) {
  constexpr std::size_t kMax = 15;
  if (g.n() > kMax) throw SizeLimitError("brute_densest is limited to 15 vertices");
  if (g.n() == 0) return 0.0;
  double best = 0.0;
  for (std::uint32_t s = 1; s < (1u << g.n()); ++s) {
    std::size_t edges = 0;
    for (const auto& e : g.edges()) edges += ((s >> e.r) & 1u) && ((s >> e.c) & 1u);
    best = std::max(best, static_cast<double>(edges) / static_cast<double>(std::popcount(s)));
  }
  return best;
}

/// Vertex-cover LP optimum by enumerating {0, 1/2, 1}^n; the LP always has
/// a half-integral optimum.
inline double half_integral_vcover(const Graph& g) {
  constexpr std::size_t kMax = 14;
  if (g.n() > kMax) throw SizeLimitError("half_integral_vcover is limited to 14 vertices");
  const std::size_t n = g.n();
  // Values in half units: 0, 1, 2.
  std::vector<int> val(n, 0);
  int best = static_cast<int>(2 * n);
  for (;;) {
    int total = 0;
    for (int v : val) total += v;
    if (total < best) {
      bool ok = true;
      for (const auto& e : g.edges()) {
        if (val[e.r] + val[e.c] < 2) {
          ok = false;
          break;
        }
      }
      if (ok) best = total;
    }
    std::size_t i = 0;
    while (i < n && val[i] == 2) val[i++] = 0;
    if (i == n) break;
    ++val[i];
  }
  return 0.5 * best;
}

struct VerifyReport {
  double max_packing = 0.0;
  double min_covering = std::numeric_limits<double>::infinity();
  double min_x = 0.0;
  bool packing_ok = false;
  bool covering_ok = false;
  bool passed = false;
};

/// Px <= (1 + eps) and Cx >= 1, both at absolute tolerance 1e-9, and x >= 0.
inline VerifyReport verify_solution(const MixedInstance& inst, std::span<const double> x, double eps) {
  constexpr double tol = 1e-9;
  check_dim(x.size(), inst.n(), "verify_solution x");
  VerifyReport r;
  const auto y = inst.packing->apply(x);
  const auto z = inst.covering->apply(x);
  r.max_packing = y.empty() ? 0.0 : *std::max_element(y.begin(), y.end());
  if (!z.empty()) r.min_covering = *std::min_element(z.begin(), z.end());
  r.min_x = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  r.packing_ok = r.max_packing <= 1.0 + eps + tol;
  r.covering_ok = r.min_covering >= 1.0 - tol;
  r.passed = r.packing_ok && r.covering_ok && r.min_x >= 0.0;
  return r;
}

}  // namespace pmwu
