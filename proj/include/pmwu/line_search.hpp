#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>

#include "pmwu/instance.hpp"
#include "pmwu/parallel.hpp"
#include "pmwu/smooth.hpp"

namespace pmwu {

/// Everything a step-size search may look at: the cached constraint values
/// y = Px, z = Cx and their directional increments dy = Pd, dz = Cd. There is
/// deliberately no operator handle here; a search never multiplies.
struct SearchInputs {
  std::span<const double> y;
  std::span<const double> dy;
  std::span<const double> z;
  std::span<const double> dz;
  double eta = 0.0;
  double epsilon = 0.1;
  Mode mode = Mode::Mixed;
  double d_sum = 0.0;             // <1, d>
  double objective_weight = 0.0;  // coefficient of the embedded objective row (1/M)
  double smax_y = 0.0;            // smax_eta(y)
  double smin_z = 0.0;            // smin_eta(z)
  double mass_y = 1.0;            // sum_i exp(eta (y_i - smax_y)), 1 up to rounding
  double mass_z = 1.0;            // sum_i exp(-eta (z_i - smin_z))
};

inline SearchInputs make_search_inputs(std::span<const double> y, std::span<const double> dy,
                                       std::span<const double> z, std::span<const double> dz, double eta,
                                       double epsilon, Mode mode = Mode::Mixed, double d_sum = 0.0,
                                       double objective_weight = 0.0) {
  check_dim(dy.size(), y.size(), "search dy");
  check_dim(dz.size(), z.size(), "search dz");
  SearchInputs si{y, dy, z, dz, eta, epsilon, mode, d_sum, objective_weight};
  si.smax_y = smax(y, eta);
  si.smin_z = smin(z, eta);
  si.mass_y = parallel_sum(y.size(), [&](std::size_t i) { return std::exp(eta * (y[i] - si.smax_y)); });
  si.mass_z = parallel_sum(z.size(), [&](std::size_t i) { return std::exp(-eta * (z[i] - si.smin_z)); });
  return si;
}

struct StepResult {
  double alpha = 0.0;
  std::size_t evaluations = 0;
  bool early_finish = false;
  std::size_t newton_iterations = 0;
  std::size_t backoff_steps = 0;
  bool fell_back = false;
};

struct SearchOptions {
  std::size_t max_evaluations = 200;
  std::size_t newton_max_iterations = 100;
  double newton_rtol = 1e-3;
  std::size_t max_backoff = 1000;
};

namespace detail {

struct SideEval {
  double delta = 0.0;  // change of the smoothed value
  double slope = 0.0;  // its derivative in alpha
};

/// Change in s(v + alpha dv) where s = smax (sign +1) or smin (sign -1),
/// relative to the base value s(v), plus the derivative. The base weights
/// exp(sign eta (v_i - base)) are regenerated on the fly.
inline SideEval side_eval(std::span<const double> v, std::span<const double> dv, double eta, double base,
                          double mass, double sign, double alpha, bool want_slope) {
  const std::size_t n = v.size();
  SideEval out;
  if (n == 1) {
    out.delta = alpha * dv[0];
    out.slope = dv[0];
    return out;
  }
  auto b = [&](std::size_t i) { return sign * eta * (v[i] - base); };  // <= 0 up to rounding
  auto a = [&](std::size_t i) { return sign * eta * alpha * dv[i]; };
  const double top = parallel_max(n, [&](std::size_t i) { return b(i) + a(i); });
  const double amax = parallel_max(n, [&](std::size_t i) { return a(i); });
  double log_ratio;
  bool direct = amax > 600.0;
  if (!direct) {
    // log(sum e^{b+a} / sum e^b) = log1p(sum e^b expm1(a) / sum e^b), exact at alpha = 0.
    const double s = parallel_sum(n, [&](std::size_t i) { return std::exp(b(i)) * std::expm1(a(i)); }) / mass;
    if (s > -0.5) {
      log_ratio = std::log1p(s);
    } else {
      direct = true;
    }
  }
  const double shifted = parallel_sum(n, [&](std::size_t i) { return std::exp(b(i) + a(i) - top); });
  if (direct) log_ratio = top + std::log(shifted) - std::log(mass);
  out.delta = sign * log_ratio / eta;
  if (want_slope) {
    const double weighted =
        parallel_sum(n, [&](std::size_t i) { return std::exp(b(i) + a(i) - top) * dv[i]; });
    out.slope = weighted / shifted;
  }
  return out;
}

}  // namespace detail

/// Psi(alpha) = smax(y + alpha dy) - smax(y).
inline double psi(const SearchInputs& si, double alpha) {
  return detail::side_eval(si.y, si.dy, si.eta, si.smax_y, si.mass_y, +1.0, alpha, false).delta;
}

/// Phi(alpha) = smin(z + alpha dz) - smin(z).
inline double phi(const SearchInputs& si, double alpha) {
  return detail::side_eval(si.z, si.dz, si.eta, si.smin_z, si.mass_z, -1.0, alpha, false).delta;
}

struct BangForBuck {
  double value = 0.0;  // f(alpha)
  double slope = 0.0;  // f'(alpha), when requested
};

/// Bang-for-buck f(alpha), oriented so that f >= 1 is the acceptance test in
/// every mode. In the pure modes the embedded objective row is evaluated in
/// closed form: objective_weight * alpha * <1,d>.
inline BangForBuck bang_for_buck_eval(const SearchInputs& si, double alpha, bool want_slope) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BangForBuck out;
  const double lin = si.objective_weight * si.d_sum;
  switch (si.mode) {
    case Mode::Mixed: {
      const auto cov = detail::side_eval(si.z, si.dz, si.eta, si.smin_z, si.mass_z, -1.0, alpha, want_slope);
      const auto pack = detail::side_eval(si.y, si.dy, si.eta, si.smax_y, si.mass_y, +1.0, alpha, want_slope);
      if (!(pack.delta > 0.0)) return {inf, 0.0};
      out.value = cov.delta / pack.delta;
      if (want_slope) out.slope = (cov.slope * pack.delta - cov.delta * pack.slope) / (pack.delta * pack.delta);
      return out;
    }
    case Mode::PurePacking: {
      const auto pack = detail::side_eval(si.y, si.dy, si.eta, si.smax_y, si.mass_y, +1.0, alpha, want_slope);
      if (!(pack.delta > 0.0)) return {inf, 0.0};
      out.value = lin * alpha / pack.delta;
      if (want_slope) out.slope = lin * (pack.delta - alpha * pack.slope) / (pack.delta * pack.delta);
      return out;
    }
    case Mode::PureCovering: {
      const auto cov = detail::side_eval(si.z, si.dz, si.eta, si.smin_z, si.mass_z, -1.0, alpha, want_slope);
      if (!(lin > 0.0)) return {inf, 0.0};
      out.value = cov.delta / (lin * alpha);
      if (want_slope) out.slope = (cov.slope * alpha - cov.delta) / (lin * alpha * alpha);
      return out;
    }
  }
  return out;
}

inline double bang_for_buck(const SearchInputs& si, double alpha) {
  return bang_for_buck_eval(si, alpha, false).value;
}

/// True when the step alpha satisfies every covering row and keeps the
/// packing rows within (1 + eps) of the covering minimum.
inline bool step_finishes(const SearchInputs& si, double alpha) {
  const double zmin = parallel_min(si.z.size(), [&](std::size_t i) { return si.z[i] + alpha * si.dz[i]; });
  if (!(zmin >= 1.0)) return false;
  const double ymax = parallel_max(si.y.size(), [&](std::size_t i) { return si.y[i] + alpha * si.dy[i]; });
  return ymax <= (1.0 + si.epsilon) * zmin;
}

/// Exponential search from alpha = 1 followed by bisection. Returns the lower
/// end of the final bracket; a value below one means f(1) < 1.
inline StepResult binary_search_step(const SearchInputs& si, const SearchOptions& opts = {}) {
  StepResult r;
  auto f = [&](double a) {
    ++r.evaluations;
    return bang_for_buck(si, a);
  };
  const double eps = si.epsilon;
  double alpha = 1.0;
  double lb = 0.5, ub = 1.0;
  if (f(1.0) >= 1.0) {
    for (;;) {
      if (step_finishes(si, alpha)) {
        r.alpha = alpha;
        r.early_finish = true;
        return r;
      }
      if (r.evaluations >= opts.max_evaluations) {
        r.alpha = alpha;
        return r;
      }
      if (f(2.0 * alpha) < 1.0) break;
      alpha *= 2.0;
    }
    lb = alpha;
    ub = 2.0 * alpha;
  }
  while (ub - lb > (1.0 - eps) * lb && r.evaluations < opts.max_evaluations) {
    const double beta = 0.5 * (lb + ub);
    if (f(beta) >= 1.0) {
      lb = beta;
    } else {
      ub = beta;
    }
  }
  r.alpha = lb;
  r.early_finish = lb >= 1.0 && step_finishes(si, lb);
  return r;
}

/// Newton's method on g(alpha) = f(alpha) - 1, warm started from the previous
/// step size when one is given (otherwise from exponential search), then
/// backed off by (1 - eps)^p until f >= 1. Falls back to binary search when
/// Newton does not converge.
inline StepResult newton_step(const SearchInputs& si, std::optional<double> warm_alpha = std::nullopt,
                              const SearchOptions& opts = {}) {
  StepResult r;
  auto fallback = [&]() {
    auto b = binary_search_step(si, opts);
    b.evaluations += r.evaluations;
    b.newton_iterations = r.newton_iterations;
    b.fell_back = true;
    return b;
  };
  auto f = [&](double a) {
    ++r.evaluations;
    return bang_for_buck(si, a);
  };

  double alpha = 1.0;
  if (warm_alpha && *warm_alpha > 0.0 && std::isfinite(*warm_alpha)) {
    alpha = *warm_alpha;
  } else {
    if (f(1.0) < 1.0) return fallback();
    for (;;) {
      if (step_finishes(si, alpha)) {
        r.alpha = alpha;
        r.early_finish = true;
        return r;
      }
      if (r.evaluations >= opts.max_evaluations) {
        r.alpha = alpha;
        return r;
      }
      if (f(2.0 * alpha) < 1.0) break;
      alpha *= 2.0;
    }
  }

  bool converged = false;
  for (std::size_t it = 0; it < opts.newton_max_iterations; ++it) {
    const auto ev = bang_for_buck_eval(si, alpha, true);
    ++r.evaluations;
    ++r.newton_iterations;
    const double g = ev.value - 1.0;
    if (!std::isfinite(g)) break;
    if (std::abs(g) <= 1e-12) {
      converged = true;
      break;
    }
    if (!(ev.slope < 0.0) || !std::isfinite(ev.slope)) break;
    const double next = std::clamp(alpha - g / ev.slope, 0.25 * alpha, 4.0 * alpha);
    const bool small = std::abs(next - alpha) <= opts.newton_rtol * alpha;
    alpha = next;
    if (small) {
      converged = true;
      break;
    }
  }
  if (!converged) return fallback();

  double fa = f(alpha);
  while (fa < 1.0 && r.backoff_steps < opts.max_backoff) {
    alpha *= 1.0 - si.epsilon;
    ++r.backoff_steps;
    fa = f(alpha);
  }
  if (fa < 1.0) return fallback();
  if (alpha < 1.0 && f(1.0) >= 1.0) alpha = 1.0;
  r.alpha = alpha;
  r.early_finish = alpha >= 1.0 && step_finishes(si, alpha);
  return r;
}

}  // namespace pmwu
