#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "pmwu/errors.hpp"
#include "pmwu/graph.hpp"
#include "pmwu/parallel.hpp"

namespace pmwu {

struct Triplet {
  index_t row;
  index_t col;
  double value;

  friend bool operator==(const Triplet&, const Triplet&) = default;
  friend auto operator<=>(const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col, a.value) <=> std::tie(b.row, b.col, b.value);
  }
};

/// Coordinate-format matrix with nonnegative entries. Reference form for
/// oracle checks and instance serialization.
class CooMatrix {
 public:
  CooMatrix() = default;
  CooMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void add(std::size_t row, std::size_t col, double value) {
    if (row >= rows_ || col >= cols_) {
      throw std::out_of_range("entry (" + std::to_string(row) + "," + std::to_string(col) + ") outside " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (!(value >= 0.0)) throw std::invalid_argument("negative or NaN entry in positive-LP matrix");
    entries_.push_back(Triplet{static_cast<index_t>(row), static_cast<index_t>(col), value});
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  std::span<const Triplet> entries() const { return entries_; }

  /// Sorts entries and sums duplicates.
  void canonicalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Triplet& a, const Triplet& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    std::vector<Triplet> merged;
    merged.reserve(entries_.size());
    for (const auto& t : entries_) {
      if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
        merged.back().value += t.value;
      } else {
        merged.push_back(t);
      }
    }
    entries_ = std::move(merged);
  }

  CooMatrix transposed() const {
    CooMatrix t(cols_, rows_);
    t.entries_.reserve(entries_.size());
    for (const auto& e : entries_) t.entries_.push_back(Triplet{e.col, e.row, e.value});
    return t;
  }

  /// Straight-line product; the independent reference for operator tests.
  std::vector<double> multiply(std::span<const double> x) const {
    check_dim(x.size(), cols_, "CooMatrix::multiply");
    std::vector<double> y(rows_, 0.0);
    for (const auto& e : entries_) y[e.row] += e.value * x[e.col];
    return y;
  }

  std::vector<double> multiply_t(std::span<const double> x) const {
    check_dim(x.size(), rows_, "CooMatrix::multiply_t");
    std::vector<double> y(cols_, 0.0);
    for (const auto& e : entries_) y[e.col] += e.value * x[e.row];
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
};

struct TileShape {
  std::size_t rows = 2048;
  std::size_t cols = 2048;
};

/// Compressed Sparse Blocks: the matrix is cut into rows x cols tiles kept in
/// row-major tile order; nonzeros inside a tile are column-major with
/// tile-local coordinates (16-bit when the tile shape allows it).
class CsbMatrix {
 public:
  CsbMatrix() = default;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  TileShape tile() const { return tile_; }
  std::size_t row_blocks() const { return row_blocks_; }
  std::size_t col_blocks() const { return col_blocks_; }
  bool compact_offsets() const { return std::holds_alternative<Coords<std::uint16_t>>(coords_); }

  std::size_t tile_nnz(std::size_t rb, std::size_t cb) const {
    const auto t = rb * col_blocks_ + cb;
    return tile_ptr_[t + 1] - tile_ptr_[t];
  }

  /// y = A x. Row blocks are distributed over workers; each output element
  /// is written by exactly one worker in a fixed order.
  void spmv(std::span<const double> x, std::span<double> y) const {
    check_dim(x.size(), cols_, "spmv input");
    check_dim(y.size(), rows_, "spmv output");
    std::visit([&](const auto& coords) { spmv_impl(coords, x, y); }, coords_);
  }

  /// y = A^T x, distributed over column blocks.
  void spmv_t(std::span<const double> x, std::span<double> y) const {
    check_dim(x.size(), rows_, "spmv_t input");
    check_dim(y.size(), cols_, "spmv_t output");
    std::visit([&](const auto& coords) { spmv_t_impl(coords, x, y); }, coords_);
  }

  template <class F>
  void for_each_nonzero(F&& f) const {
    std::visit(
        [&](const auto& coords) {
          for (std::size_t rb = 0; rb < row_blocks_; ++rb) {
            for (std::size_t cb = 0; cb < col_blocks_; ++cb) {
              const auto t = rb * col_blocks_ + cb;
              for (std::size_t k = tile_ptr_[t]; k < tile_ptr_[t + 1]; ++k) {
                f(rb * tile_.rows + coords.row[k], cb * tile_.cols + coords.col[k], values_[k]);
              }
            }
          }
        },
        coords_);
  }

  CooMatrix to_coo() const {
    CooMatrix coo(rows_, cols_);
    for_each_nonzero([&](std::size_t r, std::size_t c, double v) { coo.add(r, c, v); });
    return coo;
  }

  friend CsbMatrix build_csb(const CooMatrix& coo, TileShape tile);

 private:
  template <class Off>
  struct Coords {
    std::vector<Off> row;
    std::vector<Off> col;
  };

  template <class Off>
  void spmv_impl(const Coords<Off>& coords, std::span<const double> x, std::span<double> y) const {
    parallel_for_coarse(row_blocks_, [&](std::size_t rb) {
      const std::size_t r0 = rb * tile_.rows;
      const std::size_t r1 = std::min(rows_, r0 + tile_.rows);
      std::fill(y.begin() + r0, y.begin() + r1, 0.0);
      double* out = y.data() + r0;
      for (std::size_t cb = 0; cb < col_blocks_; ++cb) {
        const auto t = rb * col_blocks_ + cb;
        const double* in = x.data() + cb * tile_.cols;
        for (std::size_t k = tile_ptr_[t]; k < tile_ptr_[t + 1]; ++k) {
          out[coords.row[k]] += values_[k] * in[coords.col[k]];
        }
      }
    });
  }

  template <class Off>
  void spmv_t_impl(const Coords<Off>& coords, std::span<const double> x, std::span<double> y) const {
    parallel_for_coarse(col_blocks_, [&](std::size_t cb) {
      const std::size_t c0 = cb * tile_.cols;
      const std::size_t c1 = std::min(cols_, c0 + tile_.cols);
      std::fill(y.begin() + c0, y.begin() + c1, 0.0);
      double* out = y.data() + c0;
      for (std::size_t rb = 0; rb < row_blocks_; ++rb) {
        const auto t = rb * col_blocks_ + cb;
        const double* in = x.data() + rb * tile_.rows;
        for (std::size_t k = tile_ptr_[t]; k < tile_ptr_[t + 1]; ++k) {
          out[coords.col[k]] += values_[k] * in[coords.row[k]];
        }
      }
    });
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  TileShape tile_{};
  std::size_t row_blocks_ = 0;
  std::size_t col_blocks_ = 0;
  std::vector<std::size_t> tile_ptr_{0};
  std::variant<Coords<std::uint16_t>, Coords<std::uint32_t>> coords_;
  std::vector<double> values_;
};

inline CsbMatrix build_csb(const CooMatrix& coo, TileShape tile = {}) {
  if (tile.rows == 0 || tile.cols == 0) throw std::invalid_argument("tile dimensions must be positive");
  CsbMatrix a;
  a.rows_ = coo.rows();
  a.cols_ = coo.cols();
  a.tile_ = tile;
  a.row_blocks_ = (a.rows_ + tile.rows - 1) / tile.rows;
  a.col_blocks_ = (a.cols_ + tile.cols - 1) / tile.cols;
  const std::size_t ntiles = a.row_blocks_ * a.col_blocks_;

  auto tile_of = [&](const Triplet& t) { return (t.row / tile.rows) * a.col_blocks_ + t.col / tile.cols; };
  std::vector<std::size_t> order(coo.nnz());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto entries = coo.entries();
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a1 = entries[i];
    const auto& b1 = entries[j];
    return std::make_tuple(tile_of(a1), a1.col, a1.row) < std::make_tuple(tile_of(b1), b1.col, b1.row);
  });

  a.tile_ptr_.assign(ntiles + 1, 0);
  for (const auto& t : entries) ++a.tile_ptr_[tile_of(t) + 1];
  std::partial_sum(a.tile_ptr_.begin(), a.tile_ptr_.end(), a.tile_ptr_.begin());

  a.values_.resize(coo.nnz());
  auto fill = [&](auto& coords) {
    coords.row.resize(coo.nnz());
    coords.col.resize(coo.nnz());
    using Off = typename std::decay_t<decltype(coords.row)>::value_type;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& t = entries[order[k]];
      coords.row[k] = static_cast<Off>(t.row % tile.rows);
      coords.col[k] = static_cast<Off>(t.col % tile.cols);
      a.values_[k] = t.value;
    }
  };
  if (tile.rows <= 65536 && tile.cols <= 65536) {
    CsbMatrix::Coords<std::uint16_t> c16;
    fill(c16);
    a.coords_ = std::move(c16);
  } else {
    CsbMatrix::Coords<std::uint32_t> c32;
    fill(c32);
    a.coords_ = std::move(c32);
  }
  return a;
}

inline std::vector<double> spmv(const CsbMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows());
  a.spmv(x, y);
  return y;
}

inline std::vector<double> spmv_t(const CsbMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.cols());
  a.spmv_t(x, y);
  return y;
}

}  // namespace pmwu
