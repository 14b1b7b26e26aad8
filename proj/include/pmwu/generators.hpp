#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pmwu/graph.hpp"

namespace pmwu {

// Seeded random graphs for tests and benchmarks.

/// G(n, p) by geometric skipping over the n(n-1)/2 candidate pairs, so the
/// cost is proportional to the number of edges drawn.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<index_t, index_t>> pairs;
  if (n >= 2 && p > 0.0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double lq = std::log1p(-std::min(p, 1.0 - 1e-16));
    // Walk the strict lower triangle row by row (v > w).
    std::int64_t v = 1, w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
      const double r = unif(rng);
      w += 1 + (p >= 1.0 ? 0 : static_cast<std::int64_t>(std::floor(std::log1p(-r) / lq)));
      while (w >= v && v < nn) {
        w -= v;
        ++v;
      }
      if (v < nn) pairs.emplace_back(static_cast<index_t>(w), static_cast<index_t>(v));
    }
  }
  return Graph::from_edges(n, std::move(pairs));
}

/// G(n, p) with p chosen for the given expected average degree.
inline Graph erdos_renyi_avg_degree(std::size_t n, double avg_degree, std::uint64_t seed) {
  const double p = n > 1 ? std::min(1.0, avg_degree / static_cast<double>(n - 1)) : 0.0;
  return erdos_renyi(n, p, seed);
}

/// Random geometric graph on the unit square: an edge joins points closer
/// than `radius`. Points are bucketed into a grid of cell size >= radius.
inline Graph random_geometric(std::size_t n, double radius, std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> px(n), py(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = unif(rng);
    py[i] = unif(rng);
  }
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::floor(1.0 / radius)));
  auto cell_of = [&](double t) { return std::min(cells - 1, static_cast<std::size_t>(t * static_cast<double>(cells))); };
  std::vector<std::vector<index_t>> grid(cells * cells);
  for (std::size_t i = 0; i < n; ++i) grid[cell_of(py[i]) * cells + cell_of(px[i])].push_back(static_cast<index_t>(i));

  const double r2 = radius * radius;
  std::vector<std::pair<index_t, index_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const auto cx = static_cast<std::int64_t>(cell_of(px[i]));
    const auto cy = static_cast<std::int64_t>(cell_of(py[i]));
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        const auto gx = cx + dx, gy = cy + dy;
        if (gx < 0 || gy < 0 || gx >= static_cast<std::int64_t>(cells) || gy >= static_cast<std::int64_t>(cells)) continue;
        for (auto j : grid[static_cast<std::size_t>(gy) * cells + static_cast<std::size_t>(gx)]) {
          if (j <= i) continue;
          const double ddx = px[i] - px[j], ddy = py[i] - py[j];
          if (ddx * ddx + ddy * ddy < r2) pairs.emplace_back(static_cast<index_t>(i), j);
        }
      }
    }
  }
  return Graph::from_edges(n, std::move(pairs));
}

/// Radius giving an expected average degree of about avg_degree (boundary
/// effects ignored).
inline double rgg_radius_for_degree(std::size_t n, double avg_degree) {
  return std::sqrt(avg_degree / (3.14159265358979323846 * static_cast<double>(std::max<std::size_t>(n, 2) - 1)));
}

/// Random bipartite graph: left vertices [0, n_left), right vertices after
/// them, each cross pair present with probability p. Marked bipartite when
/// there is at least one left vertex.
inline Graph random_bipartite(std::size_t n_left, std::size_t n_right, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<index_t, index_t>> pairs;
  for (std::size_t u = 0; u < n_left; ++u) {
    for (std::size_t v = 0; v < n_right; ++v) {
      if (coin(rng)) pairs.emplace_back(static_cast<index_t>(u), static_cast<index_t>(n_left + v));
    }
  }
  auto g = Graph::from_edges(n_left + n_right, std::move(pairs));
  if (n_left > 0) g.mark_bipartite(n_left);
  return g;
}

}  // namespace pmwu
