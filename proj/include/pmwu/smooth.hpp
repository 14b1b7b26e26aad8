#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pmwu/errors.hpp"
#include "pmwu/parallel.hpp"

namespace pmwu {

// Smoothed maximum and minimum:
//   smax(v) =  (1/eta) log sum_i exp( eta v_i)
//   smin(v) = -(1/eta) log sum_i exp(-eta v_i)
// evaluated with a max shift, since eta reaches the hundreds or thousands.
// The gradients are the softmax weights, nonnegative and summing to one.

struct SmoothValue {
  double value = 0.0;
  std::vector<double> weights;
};

namespace detail {

inline void check_smooth_args(std::size_t n, double eta) {
  if (n == 0) throw std::invalid_argument("smoothed max/min of an empty vector");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
}

/// Writes exp(sign*eta*(v_i - peak)) / total into w and returns the smoothed
/// value. sign = +1 for smax, -1 for smin. Fused: max pass, then one pass
/// for exponentials and their sum, then a scaling pass.
inline double smooth_weights(std::span<const double> v, double eta, double sign, std::span<double> w) {
  const std::size_t n = v.size();
  const double peak = sign > 0 ? parallel_max(n, [&](std::size_t i) { return v[i]; })
                               : parallel_min(n, [&](std::size_t i) { return v[i]; });
  const double total = parallel_sum(n, [&](std::size_t i) {
    const double t = std::exp(sign * eta * (v[i] - peak));
    w[i] = t;
    return t;
  });
  const double inv = 1.0 / total;
  parallel_for(n, [&](std::size_t i) { w[i] *= inv; });
  return peak + sign * std::log(total) / eta;
}

}  // namespace detail

/// smax value with its gradient written into `weights` (same length as v).
inline double smax_weights(std::span<const double> v, double eta, std::span<double> weights) {
  detail::check_smooth_args(v.size(), eta);
  check_dim(weights.size(), v.size(), "smax weights");
  return detail::smooth_weights(v, eta, +1.0, weights);
}

inline double smin_weights(std::span<const double> v, double eta, std::span<double> weights) {
  detail::check_smooth_args(v.size(), eta);
  check_dim(weights.size(), v.size(), "smin weights");
  return detail::smooth_weights(v, eta, -1.0, weights);
}

inline SmoothValue smax_with_grad(std::span<const double> v, double eta) {
  SmoothValue out;
  out.weights.resize(v.size());
  out.value = smax_weights(v, eta, out.weights);
  return out;
}

inline SmoothValue smin_with_grad(std::span<const double> v, double eta) {
  SmoothValue out;
  out.weights.resize(v.size());
  out.value = smin_weights(v, eta, out.weights);
  return out;
}

inline double smax(std::span<const double> v, double eta) {
  detail::check_smooth_args(v.size(), eta);
  const double peak = parallel_max(v.size(), [&](std::size_t i) { return v[i]; });
  const double total = parallel_sum(v.size(), [&](std::size_t i) { return std::exp(eta * (v[i] - peak)); });
  return peak + std::log(total) / eta;
}

inline double smin(std::span<const double> v, double eta) {
  detail::check_smooth_args(v.size(), eta);
  const double floor = parallel_min(v.size(), [&](std::size_t i) { return v[i]; });
  const double total = parallel_sum(v.size(), [&](std::size_t i) { return std::exp(-eta * (v[i] - floor)); });
  return floor - std::log(total) / eta;
}

}  // namespace pmwu
