#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmwu/instance.hpp"
#include "pmwu/line_search.hpp"
#include "pmwu/operators.hpp"
#include "pmwu/parallel.hpp"
#include "pmwu/smooth.hpp"

namespace pmwu {

enum class StepMode { Standard, BinarySearch, Newton };
enum class SolveStatus { Feasible, Infeasible, IterLimit };

inline const char* to_string(StepMode m) {
  switch (m) {
    case StepMode::Standard: return "standard";
    case StepMode::BinarySearch: return "binary";
    case StepMode::Newton: return "newton";
  }
  return "?";
}

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::IterLimit: return "iter-limit";
  }
  return "?";
}

inline std::optional<StepMode> parse_step_mode(const std::string& s) {
  if (s == "standard" || s == "std") return StepMode::Standard;
  if (s == "binary" || s == "bin") return StepMode::BinarySearch;
  if (s == "newton" || s == "nwt") return StepMode::Newton;
  return std::nullopt;
}

/// Solver working set. y and z cache Px and Cx; dy and dz cache Pd and Cd.
struct SolverState {
  std::vector<double> x, y, z;
  std::vector<double> d, dy, dz;
  std::vector<double> g, h;
  std::vector<double> wp, wc;
  double eta = 0.0;
  std::size_t iteration = 0;
  std::size_t search_evaluations = 0;
  double last_alpha = 0.0;
  /// Empty unless satisfied covering rows are being dropped.
  std::vector<std::uint8_t> covering_active;
};

struct SolverConfig {
  double epsilon = 0.1;
  std::size_t max_iter = 5000;
  StepMode step_mode = StepMode::Newton;
  bool keep_satisfied_constraints = true;
  double eta_factor = 10.0;
  bool deterministic = false;
  int workers = 0;  // 0 keeps the current setting
  std::size_t resync_interval = 500;
  SearchOptions search{};
  /// Called after every accepted step.
  std::function<void(const SolverState&)> observer;

  void check() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (!(eta_factor > 0.0)) throw std::invalid_argument("eta_factor must be positive");
  }
};

/// Seconds spent in operator products, step-size search, and the remaining
/// vector work (gradients, direction, updates).
struct PhaseTimings {
  double matvec = 0.0;
  double search = 0.0;
  double vec = 0.0;

  PhaseTimings& operator+=(const PhaseTimings& o) {
    matvec += o.matvec;
    search += o.search;
    vec += o.vec;
    return *this;
  }
  double total() const { return matvec + search + vec; }
};

struct SolveResult {
  SolveStatus status = SolveStatus::IterLimit;
  /// For Feasible results x is rescaled so that min(Cx) = 1.
  std::vector<double> x;
  double max_packing = 0.0;
  double min_covering = 0.0;
  std::size_t iterations = 0;
  std::size_t search_evaluations = 0;
  double wall_seconds = 0.0;
  PhaseTimings timings;
  double eta = 0.0;
  std::size_t resyncs = 0;
  double max_drift = 0.0;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline double max_of(std::span<const double> v) {
  return parallel_max(v.size(), [&](std::size_t i) { return v[i]; });
}
inline double min_of(std::span<const double> v) {
  return parallel_min(v.size(), [&](std::size_t i) { return v[i]; });
}

inline double relative_drift(std::span<const double> cached, std::span<const double> fresh) {
  const double diff = parallel_max(cached.size(), [&](std::size_t i) { return std::abs(cached[i] - fresh[i]); });
  const double scale = std::max(1.0, parallel_max(fresh.size(), [&](std::size_t i) { return std::abs(fresh[i]); }));
  return cached.empty() ? 0.0 : diff / scale;
}

}  // namespace detail

/// x_i = eps / (n ||P_{:,i}||_inf); every packing row starts at most eps.
inline std::vector<double> init_x(const LinearOperator& packing, double eps) {
  const auto norms = packing.col_inf_norms();
  const double n = static_cast<double>(norms.size());
  std::vector<double> x(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0)) {
      throw std::invalid_argument("packing column " + std::to_string(i) + " is zero; cannot initialize");
    }
    x[i] = eps / (n * norms[i]);
  }
  return x;
}

/// d_i = scale * max{0, 1 - g_i/h_i} * x_i, with the ratio test treated as
/// failed when h_i = 0. scale is 1/(2 eta) for mixed problems and 1/eta when
/// one side is a single exact row.
inline void step_direction(std::span<const double> x, std::span<const double> g, std::span<const double> h,
                           double scale, std::span<double> d) {
  check_dim(g.size(), x.size(), "step_direction g");
  check_dim(h.size(), x.size(), "step_direction h");
  check_dim(d.size(), x.size(), "step_direction d");
  parallel_for(x.size(), [&](std::size_t i) {
    d[i] = (h[i] > 0.0 && g[i] < h[i]) ? scale * (1.0 - g[i] / h[i]) * x[i] : 0.0;
  });
}

inline std::vector<double> step_direction(const SolverState& s, bool pure_mode) {
  std::vector<double> d(s.x.size());
  step_direction(s.x, s.g, s.h, pure_mode ? 1.0 / s.eta : 1.0 / (2.0 * s.eta), d);
  return d;
}

/// (smax(y) - smin(z)) / eta.
inline double potential(std::span<const double> y, std::span<const double> z, double eta) {
  return (smax(y, eta) - smin(z, eta)) / eta;
}

inline double default_eta(std::size_t constraint_rows, double eps, double eta_factor = 10.0) {
  const double m = static_cast<double>(std::max<std::size_t>(constraint_rows, 2));
  return eta_factor * std::log(m) / eps;
}

/// Multiplicative-weights solver for  Px <= 1, Cx >= 1, x >= 0  with cached
/// constraint vectors and a pluggable step size.
///
/// Feasible means min(Cx) >= 1 and max(Px) <= (1 + eps) min(Cx); the returned
/// x is divided by min(Cx). Infeasible is reported when the direction
/// vanishes or the step search cannot reach alpha = 1.
inline SolveResult solve_feasibility(const MixedInstance& inst, const SolverConfig& cfg) {
  cfg.check();
  const auto report = validate(inst);
  if (!report.ok()) throw std::invalid_argument("invalid instance: " + report.summary());
  ExecutionScope exec(cfg.workers, cfg.deterministic);

  detail::Stopwatch wall, phase;
  SolveResult res;
  const LinearOperator& P = *inst.packing;
  const LinearOperator& C = *inst.covering;
  const std::size_t n = inst.n();
  const std::size_t mp = P.rows();
  const std::size_t mc = C.rows();
  const double eps = cfg.epsilon;
  const bool pure = inst.mode != Mode::Mixed;
  const double objective_weight = pure ? 1.0 / inst.objective_bound : 0.0;

  SolverState s;
  s.eta = default_eta(mp + mc, eps, cfg.eta_factor);
  res.eta = s.eta;
  s.x = init_x(P, eps);
  s.y.resize(mp);
  s.z.resize(mc);
  s.d.resize(n);
  s.dy.resize(mp);
  s.dz.resize(mc);
  s.g.resize(n);
  s.h.resize(n);
  s.wp.resize(mp);
  s.wc.resize(mc);
  res.timings.vec += phase.lap();
  P.apply(s.x, s.y);
  C.apply(s.x, s.z);
  res.timings.matvec += phase.lap();

  auto finish = [&](SolveStatus status) {
    res.status = status;
    const double zmin = mc > 0 ? detail::min_of(s.z) : 1.0;
    const double ymax = mp > 0 ? detail::max_of(s.y) : 0.0;
    res.x = s.x;
    res.max_packing = ymax;
    res.min_covering = zmin;
    if (status == SolveStatus::Feasible && zmin > 0.0) {
      const double inv = 1.0 / zmin;
      for (auto& v : res.x) v *= inv;
      res.max_packing = ymax * inv;
      res.min_covering = 1.0;
    }
    res.iterations = s.iteration;
    res.search_evaluations = s.search_evaluations;
    res.timings.vec += phase.lap();
    res.wall_seconds = wall.lap();
    return res;
  };

  if (mc == 0) return finish(SolveStatus::Feasible);
  if (!cfg.keep_satisfied_constraints) s.covering_active.assign(mc, 1);

  const double scale = pure ? 1.0 / s.eta : 1.0 / (2.0 * s.eta);
  std::vector<double> z_act, dz_act;
  std::vector<std::size_t> act_index;

  for (;;) {
    const double zmin = detail::min_of(s.z);
    const double ymax = detail::max_of(s.y);
    if (zmin >= 1.0 && ymax <= (1.0 + eps) * zmin) return finish(SolveStatus::Feasible);
    if (s.iteration >= cfg.max_iter) return finish(SolveStatus::IterLimit);

    // Active covering rows (all of them unless dropping is enabled).
    bool dropping = false;
    if (!s.covering_active.empty()) {
      act_index.clear();
      for (std::size_t i = 0; i < mc; ++i) {
        if (s.covering_active[i]) act_index.push_back(i);
      }
      dropping = !act_index.empty() && act_index.size() < mc;
    }

    smax_weights(s.y, s.eta, s.wp);
    if (dropping) {
      z_act.resize(act_index.size());
      for (std::size_t k = 0; k < act_index.size(); ++k) z_act[k] = s.z[act_index[k]];
      std::vector<double> w_act(act_index.size());
      smin_weights(z_act, s.eta, w_act);
      std::fill(s.wc.begin(), s.wc.end(), 0.0);
      for (std::size_t k = 0; k < act_index.size(); ++k) s.wc[act_index[k]] = w_act[k];
    } else {
      smin_weights(s.z, s.eta, s.wc);
    }
    res.timings.vec += phase.lap();

    P.apply_t(s.wp, s.g);
    C.apply_t(s.wc, s.h);
    res.timings.matvec += phase.lap();

    step_direction(s.x, s.g, s.h, scale, s.d);
    const double dmax = detail::max_of(s.d);
    res.timings.vec += phase.lap();
    if (!(dmax > 0.0)) return finish(SolveStatus::Infeasible);

    P.apply(s.d, s.dy);
    C.apply(s.d, s.dz);
    res.timings.matvec += phase.lap();

    double alpha = 1.0;
    if (cfg.step_mode != StepMode::Standard) {
      std::span<const double> zs = s.z, dzs = s.dz;
      if (dropping) {
        dz_act.resize(act_index.size());
        for (std::size_t k = 0; k < act_index.size(); ++k) dz_act[k] = s.dz[act_index[k]];
        zs = z_act;
        dzs = dz_act;
      }
      const double d_sum = pure ? parallel_sum(n, [&](std::size_t i) { return s.d[i]; }) : 0.0;
      const auto si = make_search_inputs(s.y, s.dy, zs, dzs, s.eta, eps, inst.mode, d_sum, objective_weight);
      StepResult step;
      if (cfg.step_mode == StepMode::BinarySearch) {
        step = binary_search_step(si, cfg.search);
      } else {
        std::optional<double> warm;
        if (s.last_alpha > 0.0) warm = s.last_alpha;
        step = newton_step(si, warm, cfg.search);
      }
      alpha = step.alpha;
      s.search_evaluations += step.evaluations;
    }
    res.timings.search += phase.lap();
    if (alpha < 1.0) return finish(SolveStatus::Infeasible);
    s.last_alpha = alpha;

    parallel_for(n, [&](std::size_t i) { s.x[i] += alpha * s.d[i]; });
    parallel_for(mp, [&](std::size_t i) { s.y[i] += alpha * s.dy[i]; });
    parallel_for(mc, [&](std::size_t i) { s.z[i] += alpha * s.dz[i]; });
    if (!s.covering_active.empty()) {
      for (std::size_t i = 0; i < mc; ++i) {
        if (s.z[i] >= 1.0) s.covering_active[i] = 0;
      }
    }
    ++s.iteration;
    res.timings.vec += phase.lap();

    if (cfg.resync_interval > 0 && s.iteration % cfg.resync_interval == 0) {
      const auto y_fresh = P.apply(s.x);
      const auto z_fresh = C.apply(s.x);
      res.max_drift = std::max({res.max_drift, detail::relative_drift(s.y, y_fresh),
                                detail::relative_drift(s.z, z_fresh)});
      s.y = y_fresh;
      s.z = z_fresh;
      ++res.resyncs;
      res.timings.matvec += phase.lap();
    }
    if (cfg.observer) {
      cfg.observer(s);
      phase.lap();
    }
  }
}

inline nlohmann::json to_json(const PhaseTimings& t) {
  return {{"matvec", t.matvec}, {"search", t.search}, {"vec", t.vec}};
}

inline nlohmann::json to_json(const SolveResult& r) {
  return {{"status", to_string(r.status)},
          {"max_packing", r.max_packing},
          {"min_covering", r.min_covering},
          {"violation", std::max({0.0, r.max_packing - 1.0, 1.0 - r.min_covering})},
          {"iterations", r.iterations},
          {"search_evaluations", r.search_evaluations},
          {"wall_seconds", r.wall_seconds},
          {"timings", to_json(r.timings)},
          {"eta", r.eta}};
}

/// Result of an objective search (pure packing/covering, densest subgraph).
struct OptResult {
  SolveStatus status = SolveStatus::Feasible;
  double value = 0.0;
  std::vector<double> x;
  double lower = 0.0;  // final bracket on the objective bound
  double upper = 0.0;
  std::size_t inner_solves = 0;
  std::size_t iterations = 0;
  std::size_t search_evaluations = 0;
  double wall_seconds = 0.0;
  PhaseTimings timings;

  struct Probe {
    double bound;
    SolveStatus status;
    std::size_t iterations;
  };
  std::vector<Probe> history;

  void absorb(double bound, const SolveResult& r) {
    ++inner_solves;
    iterations += r.iterations;
    search_evaluations += r.search_evaluations;
    timings += r.timings;
    history.push_back({bound, r.status, r.iterations});
  }
};

/// Inner tolerance such that (1 + inner) (1 + bracket) = 1 + eps.
inline double inner_epsilon(double eps, double bracket) { return (1.0 + eps) / (1.0 + bracket) - 1.0; }

inline constexpr std::size_t kMaxBoundProbes = 64;

/// max <1,x> s.t. Px <= 1 by bisection on the embedded objective bound M.
/// The returned x satisfies Px <= 1 exactly and <1,x> = value; the bracket
/// is shrunk to relative width eps/4 and the inner solves run at a tolerance
/// that keeps the total within (1 + eps) of the optimum.
inline OptResult solve_pure_packing(OperatorPtr packing, const SolverConfig& cfg) {
  cfg.check();
  detail::Stopwatch wall;
  ExecutionScope exec(cfg.workers, cfg.deterministic);
  OptResult out;
  const double eps = cfg.epsilon;
  const double bracket = eps / 4.0;
  SolverConfig inner = cfg;
  inner.epsilon = inner_epsilon(eps, bracket);

  const double upper_bound = objective_upper_bound(*packing);
  // Feasible witness: the initial point scaled until its tightest row is 1.
  auto witness = init_x(*packing, eps);
  const double tight = detail::max_of(packing->apply(witness));
  for (auto& v : witness) v /= tight;
  out.x = witness;
  out.value = parallel_sum(witness.size(), [&](std::size_t i) { return witness[i]; });

  double lo = out.value, hi = upper_bound;
  while (hi - lo > bracket * lo && out.inner_solves < kMaxBoundProbes) {
    const double bound = 0.5 * (lo + hi);
    const auto r = solve_feasibility(make_pure_packing(packing, ObjBound(bound)), inner);
    out.absorb(bound, r);
    if (r.status == SolveStatus::Feasible) {
      const double value = parallel_sum(r.x.size(), [&](std::size_t i) { return r.x[i]; }) / r.max_packing;
      if (value > out.value) {
        out.value = value;
        out.x = r.x;
        for (auto& v : out.x) v /= r.max_packing;
      }
      lo = bound;
    } else {
      hi = bound;
    }
  }
  out.lower = lo;
  out.upper = hi;
  out.wall_seconds = wall.lap();
  return out;
}

/// min <1,x> s.t. Cx >= 1, the covering counterpart. The returned x
/// satisfies Cx >= 1 exactly. Reports Infeasible if some row of C is zero.
inline OptResult solve_pure_covering(OperatorPtr covering, const SolverConfig& cfg) {
  cfg.check();
  detail::Stopwatch wall;
  ExecutionScope exec(cfg.workers, cfg.deterministic);
  OptResult out;
  const double eps = cfg.epsilon;
  const double bracket = eps / 4.0;
  SolverConfig inner = cfg;
  inner.epsilon = inner_epsilon(eps, bracket);
  const std::size_t n = covering->cols();
  const std::size_t mc = covering->rows();

  std::vector<double> ones(n, 1.0);
  const auto rowsum = covering->apply(ones);
  const double min_rowsum = mc > 0 ? detail::min_of(rowsum) : 1.0;
  if (!(min_rowsum > 0.0)) {
    out.status = SolveStatus::Infeasible;
    out.value = std::numeric_limits<double>::infinity();
    out.wall_seconds = wall.lap();
    return out;
  }
  if (mc == 0) {
    out.x.assign(n, 0.0);
    out.wall_seconds = wall.lap();
    return out;
  }

  // Lower bounds: each row alone needs <1,x> >= 1/max_j c_ij, and the dual
  // point y = 1/max_j (C^T 1)_j certifies <1,x> >= m_c / max colsum.
  std::vector<double> rowmax(mc, 0.0);
  covering->visit_nonzeros([&](std::size_t i, std::size_t, double v) { rowmax[i] = std::max(rowmax[i], v); });
  double lower = 0.0;
  for (double r : rowmax) lower = std::max(lower, 1.0 / r);
  const auto colsum = covering->apply_t(std::vector<double>(mc, 1.0));
  const double max_colsum = detail::max_of(colsum);
  if (max_colsum > 0.0) lower = std::max(lower, static_cast<double>(mc) / max_colsum);

  // Feasible witness: a uniform vector scaled to satisfy the weakest row.
  out.x.assign(n, 1.0 / min_rowsum);
  out.value = static_cast<double>(n) / min_rowsum;

  double lo = std::min(lower, out.value), hi = out.value;
  while (hi - lo > bracket * lo && out.inner_solves < kMaxBoundProbes) {
    const double bound = 0.5 * (lo + hi);
    const auto r = solve_feasibility(make_pure_covering(covering, ObjBound(bound)), inner);
    out.absorb(bound, r);
    if (r.status == SolveStatus::Feasible) {
      const double value = parallel_sum(r.x.size(), [&](std::size_t i) { return r.x[i]; });
      if (value < out.value) {
        out.value = value;
        out.x = r.x;
      }
      hi = bound;
    } else {
      lo = bound;
    }
  }
  out.lower = lo;
  out.upper = hi;
  out.wall_seconds = wall.lap();
  return out;
}

inline nlohmann::json to_json(const OptResult& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& p : r.history) {
    history.push_back({{"bound", p.bound}, {"status", to_string(p.status)}, {"iterations", p.iterations}});
  }
  return {{"status", to_string(r.status)},
          {"value", r.value},
          {"bracket", {r.lower, r.upper}},
          {"inner_solves", r.inner_solves},
          {"iterations", r.iterations},
          {"search_evaluations", r.search_evaluations},
          {"wall_seconds", r.wall_seconds},
          {"timings", to_json(r.timings)},
          {"history", std::move(history)}};
}

}  // namespace pmwu
