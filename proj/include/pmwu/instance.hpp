#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmwu/errors.hpp"
#include "pmwu/operators.hpp"
#include "pmwu/sparse.hpp"

namespace pmwu {

enum class Mode { Mixed, PurePacking, PureCovering };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Mixed: return "mixed";
    case Mode::PurePacking: return "pure-packing";
    case Mode::PureCovering: return "pure-covering";
  }
  return "?";
}

/// Estimate of the optimal objective value; the quantity binary-searched by
/// the pure packing/covering drivers.
class ObjBound {
 public:
  explicit ObjBound(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument("objective bound must be positive");
  }
  double value() const { return value_; }

 private:
  double value_;
};

/// Feasibility problem  P x <= 1,  C x >= 1,  x >= 0  over a shared x.
///
/// In PurePacking mode C is the single row (1/M) 1^T, so C x >= 1 encodes
/// the objective <1,x> >= M; PureCovering mirrors this with P.
struct MixedInstance {
  OperatorPtr packing;
  OperatorPtr covering;
  Mode mode = Mode::Mixed;
  double objective_bound = 0.0;

  std::size_t n() const { return packing ? packing->cols() : 0; }
  std::size_t packing_rows() const { return packing ? packing->rows() : 0; }
  std::size_t covering_rows() const { return covering ? covering->rows() : 0; }
};

inline MixedInstance make_mixed(OperatorPtr packing, OperatorPtr covering) {
  return MixedInstance{std::move(packing), std::move(covering), Mode::Mixed, 0.0};
}

inline MixedInstance make_pure_packing(OperatorPtr packing, ObjBound bound) {
  const auto n = packing->cols();
  auto row = std::make_shared<DenseRowOperator>(n, 1.0 / bound.value());
  return MixedInstance{std::move(packing), std::move(row), Mode::PurePacking, bound.value()};
}

inline MixedInstance make_pure_covering(OperatorPtr covering, ObjBound bound) {
  const auto n = covering->cols();
  auto row = std::make_shared<DenseRowOperator>(n, 1.0 / bound.value());
  return MixedInstance{std::move(row), std::move(covering), Mode::PureCovering, bound.value()};
}

struct Violation {
  enum class Kind { MissingOperator, DimensionMismatch, NegativeEntry, ZeroPackingColumn, EmptyCoveringRow };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind k) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == k; });
  }
  std::string summary() const {
    std::string s;
    for (const auto& v : violations) s += (s.empty() ? "" : "; ") + v.message;
    return s;
  }
};

namespace detail {
inline void probe_nonnegative(const LinearOperator& op, const char* which, ValidationReport& report,
                              std::size_t samples = 16) {
  if (op.cols() == 0) return;
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> pick(0, op.cols() - 1);
  std::vector<double> unit(op.cols(), 0.0), out(op.rows());
  for (std::size_t s = 0; s < std::min(samples, op.cols()); ++s) {
    const std::size_t j = op.cols() <= samples ? s : pick(rng);
    unit[j] = 1.0;
    op.apply(unit, out);
    unit[j] = 0.0;
    if (std::any_of(out.begin(), out.end(), [](double v) { return !(v >= 0.0); })) {
      report.violations.push_back({Violation::Kind::NegativeEntry,
                                   std::string(which) + " has a negative entry in column " + std::to_string(j)});
      return;
    }
  }
}
}  // namespace detail

/// Structural checks. Never throws on a bad instance; every problem found
/// is returned as a violation.
inline ValidationReport validate(const MixedInstance& inst) {
  ValidationReport report;
  if (!inst.packing || !inst.covering) {
    report.violations.push_back({Violation::Kind::MissingOperator, "packing and covering operators are required"});
    return report;
  }
  if (inst.packing->cols() != inst.covering->cols()) {
    report.violations.push_back({Violation::Kind::DimensionMismatch,
                                 "packing has " + std::to_string(inst.packing->cols()) +
                                     " columns but covering has " + std::to_string(inst.covering->cols())});
    return report;
  }
  detail::probe_nonnegative(*inst.packing, "packing", report);
  detail::probe_nonnegative(*inst.covering, "covering", report);
  const auto norms = inst.packing->col_inf_norms();
  for (std::size_t j = 0; j < norms.size(); ++j) {
    if (!(norms[j] > 0.0)) {
      report.violations.push_back({Violation::Kind::ZeroPackingColumn,
                                   "unbounded variable at init: packing column " + std::to_string(j) + " is zero"});
      break;
    }
  }
  if (inst.covering->rows() > 0 && inst.covering->cols() > 0) {
    std::vector<double> ones(inst.covering->cols(), 1.0);
    const auto rowsum = inst.covering->apply(ones);
    for (std::size_t i = 0; i < rowsum.size(); ++i) {
      if (!(rowsum[i] > 0.0)) {
        report.violations.push_back({Violation::Kind::EmptyCoveringRow,
                                     "covering row " + std::to_string(i) + " is zero and can never be satisfied"});
        break;
      }
    }
  }
  return report;
}

/// sum_i max_{j : p_ji > 0} 1/p_ji, an upper bound on max <1,x> s.t. Px <= 1.
inline double objective_upper_bound(const LinearOperator& packing) {
  const auto mins = packing.col_min_positive();
  double total = 0.0;
  for (std::size_t j = 0; j < mins.size(); ++j) {
    if (!std::isfinite(mins[j])) {
      throw std::invalid_argument("packing column " + std::to_string(j) + " is zero; objective is unbounded");
    }
    total += 1.0 / mins[j];
  }
  return total;
}

// Explicit-COO JSON form:
//   {"n": N, "mode": "mixed",
//    "packing":  {"rows": R, "entries": [[i, j, v], ...]},
//    "covering": {"rows": R, "entries": [[i, j, v], ...]}}

inline nlohmann::json coo_to_json(const CooMatrix& a) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& t : a.entries()) entries.push_back({t.row, t.col, t.value});
  return {{"rows", a.rows()}, {"entries", std::move(entries)}};
}

inline CooMatrix coo_from_json(const nlohmann::json& j, std::size_t cols) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("entries")) {
    throw FormatError("matrix object needs 'rows' and 'entries'");
  }
  CooMatrix a(j.at("rows").get<std::size_t>(), cols);
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw FormatError("matrix entry must be [row, col, value]");
    const auto v = e[2].get<double>();
    if (!(v >= 0.0)) throw FormatError("negative entry in positive-LP matrix");
    a.add(e[0].get<std::size_t>(), e[1].get<std::size_t>(), v);
  }
  return a;
}

inline nlohmann::json instance_to_json(const MixedInstance& inst) {
  return {{"n", inst.n()},
          {"mode", to_string(inst.mode)},
          {"packing", coo_to_json(inst.packing->to_coo())},
          {"covering", coo_to_json(inst.covering->to_coo())}};
}

/// Reads the explicit form back as a mixed instance over CSB operators.
inline MixedInstance instance_from_json(const nlohmann::json& j, TileShape tile = {}) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    auto p = std::make_shared<CsbOperator>(coo_from_json(j.at("packing"), n), tile);
    auto c = std::make_shared<CsbOperator>(coo_from_json(j.at("covering"), n), tile);
    return make_mixed(std::move(p), std::move(c));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
}

inline MixedInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
  return instance_from_json(j);
}

}  // namespace pmwu
