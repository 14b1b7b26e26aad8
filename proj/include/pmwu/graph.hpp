#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmwu/errors.hpp"

namespace pmwu {

using index_t = std::uint32_t;

struct Edge {
  index_t r;
  index_t c;
};

/// Undirected simple graph. Edges are stored once with r < c and numbered
/// 0..m-1 in row-major (r, c) order; that number is the edge identifier used
/// by every implicit operator. A column-major permutation of the edge list is
/// kept alongside so both traversal orders are contiguous.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an edge list. Pairs may come in either orientation
  /// but self-loops and duplicate edges are rejected.
  static Graph from_edges(std::size_t n, std::vector<std::pair<index_t, index_t>> pairs) {
    Graph g;
    g.n_ = n;
    for (auto& [a, b] : pairs) {
      if (a >= n || b >= n) {
        throw std::out_of_range("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                ") outside vertex range " + std::to_string(n));
      }
      if (a == b) throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
      if (a > b) std::swap(a, b);
    }
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) {
      throw std::invalid_argument("duplicate edge in edge list");
    }
    g.edges_.reserve(pairs.size());
    for (const auto& [a, b] : pairs) g.edges_.push_back(Edge{a, b});
    g.build_index();
    return g;
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

  std::size_t degree(std::size_t v) const { return degree_[v]; }
  std::span<const index_t> degrees() const { return degree_; }
  std::size_t max_degree() const {
    return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
  }

  /// Edges with r == v are row_begin(v)..row_end(v) (edge ids are contiguous).
  std::size_t row_begin(std::size_t v) const { return row_ptr_[v]; }
  std::size_t row_end(std::size_t v) const { return row_ptr_[v + 1]; }

  /// Edge ids with c == v are col_order()[col_begin(v)..col_end(v)).
  std::size_t col_begin(std::size_t v) const { return col_ptr_[v]; }
  std::size_t col_end(std::size_t v) const { return col_ptr_[v + 1]; }
  std::span<const index_t> col_order() const { return col_order_; }

  /// For graphs read as a biadjacency matrix: vertices [0, n_left) form the
  /// left side. Zero for graphs not marked bipartite.
  std::size_t n_left() const { return n_left_; }
  bool is_marked_bipartite() const { return n_left_ > 0; }
  void mark_bipartite(std::size_t n_left) {
    for (const auto& e : edges_) {
      if (!(e.r < n_left && e.c >= n_left)) {
        throw std::invalid_argument("edge does not cross the bipartition");
      }
    }
    n_left_ = n_left;
  }

 private:
  void build_index() {
    degree_.assign(n_, 0);
    row_ptr_.assign(n_ + 1, 0);
    col_ptr_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++degree_[e.r];
      ++degree_[e.c];
      ++row_ptr_[e.r + 1];
      ++col_ptr_[e.c + 1];
    }
    std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
    std::partial_sum(col_ptr_.begin(), col_ptr_.end(), col_ptr_.begin());
    // Stable counting sort by column keeps row order inside each column.
    col_order_.resize(edges_.size());
    std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      col_order_[cursor[edges_[e].c]++] = static_cast<index_t>(e);
    }
  }

  std::size_t n_ = 0;
  std::size_t n_left_ = 0;
  std::vector<Edge> edges_;
  std::vector<index_t> degree_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_ptr_;
  std::vector<index_t> col_order_;
};

}  // namespace pmwu
