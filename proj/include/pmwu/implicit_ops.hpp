#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "pmwu/errors.hpp"
#include "pmwu/graph.hpp"
#include "pmwu/operators.hpp"
#include "pmwu/parallel.hpp"

namespace pmwu {

// Matrix-free products with the graph-derived constraint matrices. All of
// them read only the Graph's (r, c, e) triplets.
//
//   M  (n x m)   incidence:       M[u,e] = 1 iff u is an endpoint of e
//   O  (n x 2m)  vertex-edge pair: O[r,2e] = O[c,2e+1] = 1 for e = (r,c)
//   W  (m x 2m)  interweaved identity: W[e,2e] = W[e,2e+1] = 1
//
// Forward products of M and O accumulate into vertex entries. They run in
// two phases, first over edges grouped by row index and then over edges
// grouped by column index, so every y[v] has one writer per phase.

/// y = M x.
inline void incidence_apply(const Graph& g, std::span<const double> x, std::span<double> y) {
  check_dim(x.size(), g.m(), "incidence_apply input");
  check_dim(y.size(), g.n(), "incidence_apply output");
  parallel_for(g.n(), [&](std::size_t v) {
    double acc = 0.0;
    for (std::size_t e = g.row_begin(v); e < g.row_end(v); ++e) acc += x[e];
    y[v] = acc;
  });
  const auto order = g.col_order();
  parallel_for(g.n(), [&](std::size_t v) {
    double acc = y[v];
    for (std::size_t k = g.col_begin(v); k < g.col_end(v); ++k) acc += x[order[k]];
    y[v] = acc;
  });
}

/// y = M^T x, i.e. y[e] = x[r] + x[c].
inline void incidence_apply_t(const Graph& g, std::span<const double> x, std::span<double> y) {
  check_dim(x.size(), g.n(), "incidence_apply_t input");
  check_dim(y.size(), g.m(), "incidence_apply_t output");
  const auto edges = g.edges();
  parallel_for(g.m(), [&](std::size_t e) { y[e] = x[edges[e].r] + x[edges[e].c]; });
}

/// y = O x: y[r] += x[2e], y[c] += x[2e+1].
inline void pair_apply(const Graph& g, std::span<const double> x, std::span<double> y) {
  check_dim(x.size(), 2 * g.m(), "pair_apply input");
  check_dim(y.size(), g.n(), "pair_apply output");
  parallel_for(g.n(), [&](std::size_t v) {
    double acc = 0.0;
    for (std::size_t e = g.row_begin(v); e < g.row_end(v); ++e) acc += x[2 * e];
    y[v] = acc;
  });
  const auto order = g.col_order();
  parallel_for(g.n(), [&](std::size_t v) {
    double acc = y[v];
    for (std::size_t k = g.col_begin(v); k < g.col_end(v); ++k) acc += x[2 * std::size_t{order[k]} + 1];
    y[v] = acc;
  });
}

/// y = O^T x: y[2e] = x[r], y[2e+1] = x[c].
inline void pair_apply_t(const Graph& g, std::span<const double> x, std::span<double> y) {
  check_dim(x.size(), g.n(), "pair_apply_t input");
  check_dim(y.size(), 2 * g.m(), "pair_apply_t output");
  const auto edges = g.edges();
  parallel_for(g.m(), [&](std::size_t e) {
    y[2 * e] = x[edges[e].r];
    y[2 * e + 1] = x[edges[e].c];
  });
}

/// y = W x: y[e] = x[2e] + x[2e+1].
inline void interweave_apply(std::span<const double> x, std::span<double> y) {
  check_dim(x.size(), 2 * y.size(), "interweave_apply input");
  parallel_for(y.size(), [&](std::size_t e) { y[e] = x[2 * e] + x[2 * e + 1]; });
}

/// y = W^T x: y[2e] = y[2e+1] = x[e].
inline void interweave_apply_t(std::span<const double> x, std::span<double> y) {
  check_dim(y.size(), 2 * x.size(), "interweave_apply_t output");
  parallel_for(x.size(), [&](std::size_t e) { y[2 * e] = y[2 * e + 1] = x[e]; });
}

inline std::vector<double> incidence_apply(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.n());
  incidence_apply(g, x, y);
  return y;
}
inline std::vector<double> incidence_apply_t(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.m());
  incidence_apply_t(g, x, y);
  return y;
}
inline std::vector<double> pair_apply(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.n());
  pair_apply(g, x, y);
  return y;
}
inline std::vector<double> pair_apply_t(const Graph& g, std::span<const double> x) {
  std::vector<double> y(2 * g.m());
  pair_apply_t(g, x, y);
  return y;
}
inline std::vector<double> interweave_apply(std::span<const double> x) {
  std::vector<double> y(x.size() / 2);
  interweave_apply(x, y);
  return y;
}
inline std::vector<double> interweave_apply_t(std::span<const double> x) {
  std::vector<double> y(2 * x.size());
  interweave_apply_t(x, y);
  return y;
}

namespace detail {
// 0/1 operators: a column's max and min positive entry are both 1 whenever
// the column is nonempty.
inline std::vector<double> unit_norms(std::size_t cols, const std::vector<bool>& nonempty, double empty_value) {
  std::vector<double> out(cols);
  for (std::size_t j = 0; j < cols; ++j) out[j] = nonempty[j] ? 1.0 : empty_value;
  return out;
}
}  // namespace detail

class IncidenceOp final : public LinearOperator {
 public:
  explicit IncidenceOp(std::shared_ptr<const Graph> g) : g_(std::move(g)) {}

  std::size_t rows() const override { return g_->n(); }
  std::size_t cols() const override { return g_->m(); }
  const Graph& graph() const { return *g_; }
  std::string name() const override { return "incidence"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    for (std::size_t e = 0; e < g_->m(); ++e) {
      visit(g_->edge(e).r, e, 1.0);
      visit(g_->edge(e).c, e, 1.0);
    }
  }
  std::vector<double> col_inf_norms() const override { return std::vector<double>(g_->m(), 1.0); }
  std::vector<double> col_min_positive() const override { return std::vector<double>(g_->m(), 1.0); }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override { incidence_apply(*g_, x, y); }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override {
    incidence_apply_t(*g_, x, y);
  }

 private:
  std::shared_ptr<const Graph> g_;
};

/// M^T viewed directly (one row per edge): the vertex-cover constraint matrix.
class IncidenceTransposeOp final : public LinearOperator {
 public:
  explicit IncidenceTransposeOp(std::shared_ptr<const Graph> g) : g_(std::move(g)) {}

  std::size_t rows() const override { return g_->m(); }
  std::size_t cols() const override { return g_->n(); }
  std::string name() const override { return "incidence^T"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    for (std::size_t e = 0; e < g_->m(); ++e) {
      visit(e, g_->edge(e).r, 1.0);
      visit(e, g_->edge(e).c, 1.0);
    }
  }
  std::vector<double> col_inf_norms() const override {
    std::vector<bool> nonempty(g_->n());
    for (std::size_t v = 0; v < g_->n(); ++v) nonempty[v] = g_->degree(v) > 0;
    return detail::unit_norms(g_->n(), nonempty, 0.0);
  }
  std::vector<double> col_min_positive() const override {
    std::vector<bool> nonempty(g_->n());
    for (std::size_t v = 0; v < g_->n(); ++v) nonempty[v] = g_->degree(v) > 0;
    return detail::unit_norms(g_->n(), nonempty, std::numeric_limits<double>::infinity());
  }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override {
    incidence_apply_t(*g_, x, y);
  }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override { incidence_apply(*g_, x, y); }

 private:
  std::shared_ptr<const Graph> g_;
};

class PairOp final : public LinearOperator {
 public:
  explicit PairOp(std::shared_ptr<const Graph> g) : g_(std::move(g)) {}

  std::size_t rows() const override { return g_->n(); }
  std::size_t cols() const override { return 2 * g_->m(); }
  std::string name() const override { return "pair"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    for (std::size_t e = 0; e < g_->m(); ++e) {
      visit(g_->edge(e).r, 2 * e, 1.0);
      visit(g_->edge(e).c, 2 * e + 1, 1.0);
    }
  }
  std::vector<double> col_inf_norms() const override { return std::vector<double>(2 * g_->m(), 1.0); }
  std::vector<double> col_min_positive() const override { return std::vector<double>(2 * g_->m(), 1.0); }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override { pair_apply(*g_, x, y); }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override { pair_apply_t(*g_, x, y); }

 private:
  std::shared_ptr<const Graph> g_;
};

class InterweaveOp final : public LinearOperator {
 public:
  explicit InterweaveOp(std::size_t m) : m_(m) {}

  std::size_t rows() const override { return m_; }
  std::size_t cols() const override { return 2 * m_; }
  std::string name() const override { return "interweave"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    for (std::size_t e = 0; e < m_; ++e) {
      visit(e, 2 * e, 1.0);
      visit(e, 2 * e + 1, 1.0);
    }
  }
  std::vector<double> col_inf_norms() const override { return std::vector<double>(2 * m_, 1.0); }
  std::vector<double> col_min_positive() const override { return std::vector<double>(2 * m_, 1.0); }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override { interweave_apply(x, y); }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override {
    interweave_apply_t(x, y);
  }

 private:
  std::size_t m_;
};

/// Explicit COO forms of the implicit matrices, for tests and export.
inline CooMatrix explicit_incidence(const Graph& g) {
  CooMatrix a(g.n(), g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    a.add(g.edge(e).r, e, 1.0);
    a.add(g.edge(e).c, e, 1.0);
  }
  return a;
}

inline CooMatrix explicit_pair(const Graph& g) {
  CooMatrix a(g.n(), 2 * g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    a.add(g.edge(e).r, 2 * e, 1.0);
    a.add(g.edge(e).c, 2 * e + 1, 1.0);
  }
  return a;
}

inline CooMatrix explicit_interweave(std::size_t m) {
  CooMatrix a(m, 2 * m);
  for (std::size_t e = 0; e < m; ++e) {
    a.add(e, 2 * e, 1.0);
    a.add(e, 2 * e + 1, 1.0);
  }
  return a;
}

/// I + A over the graph's vertices (closed neighborhoods).
inline CooMatrix explicit_closed_neighborhood(const Graph& g) {
  CooMatrix a(g.n(), g.n());
  for (std::size_t v = 0; v < g.n(); ++v) a.add(v, v, 1.0);
  for (const auto& e : g.edges()) {
    a.add(e.r, e.c, 1.0);
    a.add(e.c, e.r, 1.0);
  }
  return a;
}

}  // namespace pmwu
