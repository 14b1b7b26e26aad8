#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pmwu/errors.hpp"
#include "pmwu/parallel.hpp"
#include "pmwu/sparse.hpp"

namespace pmwu {

/// Nonnegative constraint matrix known only through its products.
///
/// Implementations override the protected do_* hooks; the public entry
/// points check shapes. visit_nonzeros() enumerates the implied entries and
/// backs the default column statistics and the COO export.
class LinearOperator {
 public:
  using NonzeroVisitor = std::function<void(std::size_t row, std::size_t col, double value)>;

  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;

  void apply(std::span<const double> x, std::span<double> y) const {
    check_dim(x.size(), cols(), "apply input");
    check_dim(y.size(), rows(), "apply output");
    do_apply(x, y);
  }

  void apply_t(std::span<const double> x, std::span<double> y) const {
    check_dim(x.size(), rows(), "apply_t input");
    check_dim(y.size(), cols(), "apply_t output");
    do_apply_t(x, y);
  }

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(rows());
    apply(x, y);
    return y;
  }

  std::vector<double> apply_t(std::span<const double> x) const {
    std::vector<double> y(cols());
    apply_t(x, y);
    return y;
  }

  /// Enumerates every structurally nonzero entry. The default probes the
  /// operator with unit vectors, which costs cols() applications.
  virtual void visit_nonzeros(const NonzeroVisitor& visit) const {
    std::vector<double> unit(cols(), 0.0), column(rows());
    for (std::size_t j = 0; j < cols(); ++j) {
      unit[j] = 1.0;
      apply(unit, column);
      unit[j] = 0.0;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (column[i] != 0.0) visit(i, j, column[i]);
      }
    }
  }

  /// Largest entry of each column (the column infinity norm, entries >= 0).
  virtual std::vector<double> col_inf_norms() const {
    std::vector<double> out(cols(), 0.0);
    visit_nonzeros([&](std::size_t, std::size_t j, double v) { out[j] = std::max(out[j], v); });
    return out;
  }

  /// Smallest positive entry of each column; +inf for empty columns.
  virtual std::vector<double> col_min_positive() const {
    std::vector<double> out(cols(), std::numeric_limits<double>::infinity());
    visit_nonzeros([&](std::size_t, std::size_t j, double v) {
      if (v > 0.0) out[j] = std::min(out[j], v);
    });
    return out;
  }

  CooMatrix to_coo() const {
    CooMatrix coo(rows(), cols());
    visit_nonzeros([&](std::size_t i, std::size_t j, double v) { coo.add(i, j, v); });
    coo.canonicalize();
    return coo;
  }

  virtual std::string name() const = 0;

 protected:
  virtual void do_apply(std::span<const double> x, std::span<double> y) const = 0;
  virtual void do_apply_t(std::span<const double> x, std::span<double> y) const = 0;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

/// Explicit matrix stored in CSB form.
class CsbOperator final : public LinearOperator {
 public:
  explicit CsbOperator(CsbMatrix a) : a_(std::move(a)) {}
  explicit CsbOperator(const CooMatrix& coo, TileShape tile = {}) : a_(build_csb(coo, tile)) {}

  std::size_t rows() const override { return a_.rows(); }
  std::size_t cols() const override { return a_.cols(); }
  const CsbMatrix& matrix() const { return a_; }
  std::string name() const override { return "csb"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    a_.for_each_nonzero([&](std::size_t i, std::size_t j, double v) { visit(i, j, v); });
  }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override { a_.spmv(x, y); }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override { a_.spmv_t(x, y); }

 private:
  CsbMatrix a_;
};

/// The single row coefficient * 1^T, used to embed an objective as one
/// extra constraint. Never materialized.
class DenseRowOperator final : public LinearOperator {
 public:
  DenseRowOperator(std::size_t cols, double coefficient) : cols_(cols), coefficient_(coefficient) {
    if (!(coefficient > 0.0)) throw std::invalid_argument("dense row coefficient must be positive");
  }

  std::size_t rows() const override { return 1; }
  std::size_t cols() const override { return cols_; }
  double coefficient() const { return coefficient_; }
  std::string name() const override { return "dense-row"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    for (std::size_t j = 0; j < cols_; ++j) visit(0, j, coefficient_);
  }
  std::vector<double> col_inf_norms() const override { return std::vector<double>(cols_, coefficient_); }
  std::vector<double> col_min_positive() const override { return std::vector<double>(cols_, coefficient_); }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override {
    y[0] = coefficient_ * parallel_sum(x.size(), [&](std::size_t i) { return x[i]; });
  }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override {
    const double v = coefficient_ * x[0];
    parallel_for(y.size(), [&](std::size_t i) { y[i] = v; });
  }

 private:
  std::size_t cols_;
  double coefficient_;
};

/// Op^T as an operator.
class TransposeOperator final : public LinearOperator {
 public:
  explicit TransposeOperator(OperatorPtr inner) : inner_(std::move(inner)) {}

  std::size_t rows() const override { return inner_->cols(); }
  std::size_t cols() const override { return inner_->rows(); }
  std::string name() const override { return inner_->name() + "^T"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    inner_->visit_nonzeros([&](std::size_t i, std::size_t j, double v) { visit(j, i, v); });
  }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override { inner_->apply_t(x, y); }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override { inner_->apply(x, y); }

 private:
  OperatorPtr inner_;
};

/// diag(scale) * Op restricted to a subset of rows, in the given order.
/// Used to normalize right-hand sides to one and to drop vacuous rows.
class ScaledRowsOperator final : public LinearOperator {
 public:
  /// Keeps every row, scaling row i by scale[i].
  ScaledRowsOperator(OperatorPtr inner, std::vector<double> scale)
      : ScaledRowsOperator(inner, identity_rows(inner->rows()), std::move(scale)) {}

  ScaledRowsOperator(OperatorPtr inner, std::vector<index_t> selected, std::vector<double> scale)
      : inner_(std::move(inner)), selected_(std::move(selected)), scale_(std::move(scale)) {
    check_dim(scale_.size(), selected_.size(), "ScaledRowsOperator scale");
    position_.assign(inner_->rows(), kDropped);
    for (std::size_t k = 0; k < selected_.size(); ++k) {
      if (selected_[k] >= inner_->rows()) throw std::out_of_range("selected row out of range");
      if (!(scale_[k] >= 0.0)) throw std::invalid_argument("row scale must be nonnegative");
      position_[selected_[k]] = static_cast<index_t>(k);
    }
    full_ = selected_.size() == inner_->rows();
    for (std::size_t k = 0; full_ && k < selected_.size(); ++k) full_ = selected_[k] == k;
  }

  std::size_t rows() const override { return selected_.size(); }
  std::size_t cols() const override { return inner_->cols(); }
  std::span<const index_t> selected_rows() const { return selected_; }
  std::span<const double> scales() const { return scale_; }
  std::string name() const override { return "scaled(" + inner_->name() + ")"; }

  void visit_nonzeros(const NonzeroVisitor& visit) const override {
    inner_->visit_nonzeros([&](std::size_t i, std::size_t j, double v) {
      const auto k = position_[i];
      if (k != kDropped && scale_[k] * v != 0.0) visit(k, j, scale_[k] * v);
    });
  }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override {
    if (full_) {
      inner_->apply(x, y);
      parallel_for(y.size(), [&](std::size_t i) { y[i] *= scale_[i]; });
      return;
    }
    std::vector<double> tmp(inner_->rows());
    inner_->apply(x, tmp);
    parallel_for(y.size(), [&](std::size_t k) { y[k] = scale_[k] * tmp[selected_[k]]; });
  }

  void do_apply_t(std::span<const double> x, std::span<double> y) const override {
    std::vector<double> tmp(inner_->rows(), 0.0);
    parallel_for(selected_.size(), [&](std::size_t k) { tmp[selected_[k]] = scale_[k] * x[k]; });
    inner_->apply_t(tmp, y);
  }

 private:
  static constexpr index_t kDropped = std::numeric_limits<index_t>::max();

  static std::vector<index_t> identity_rows(std::size_t n) {
    std::vector<index_t> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<index_t>(i);
    return r;
  }

  OperatorPtr inner_;
  std::vector<index_t> selected_;
  std::vector<double> scale_;
  std::vector<index_t> position_;
  bool full_ = false;
};

/// Forwards to an inner operator and counts applications.
class CountingOperator final : public LinearOperator {
 public:
  explicit CountingOperator(OperatorPtr inner) : inner_(std::move(inner)) {}

  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }
  std::string name() const override { return inner_->name(); }
  void visit_nonzeros(const NonzeroVisitor& visit) const override { inner_->visit_nonzeros(visit); }
  std::vector<double> col_inf_norms() const override { return inner_->col_inf_norms(); }
  std::vector<double> col_min_positive() const override { return inner_->col_min_positive(); }

  std::size_t forward_count() const { return forward_.load(); }
  std::size_t transpose_count() const { return transpose_.load(); }
  void reset() const {
    forward_ = 0;
    transpose_ = 0;
  }

 protected:
  void do_apply(std::span<const double> x, std::span<double> y) const override {
    ++forward_;
    inner_->apply(x, y);
  }
  void do_apply_t(std::span<const double> x, std::span<double> y) const override {
    ++transpose_;
    inner_->apply_t(x, y);
  }

 private:
  OperatorPtr inner_;
  mutable std::atomic<std::size_t> forward_{0};
  mutable std::atomic<std::size_t> transpose_{0};
};

}  // namespace pmwu
