#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pmwu/smooth.hpp"

using namespace pmwu;

namespace {
std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> val(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = val(rng);
  return v;
}
}  // namespace

TEST(Smooth, SandwichBounds) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    const double eta = std::exp(std::uniform_real_distribution<double>(-2.0, 8.0)(rng));
    const auto v = random_vec(rng, n, -5.0, 5.0);
    const double mx = *std::max_element(v.begin(), v.end());
    const double mn = *std::min_element(v.begin(), v.end());
    const double slack = std::log(static_cast<double>(n)) / eta;
    const double tol = 1e-12 * std::max(1.0, std::abs(mx) + slack);
    EXPECT_GE(smax(v, eta), mx - tol);
    EXPECT_LE(smax(v, eta), mx + slack + tol);
    EXPECT_LE(smin(v, eta), mn + tol);
    EXPECT_GE(smin(v, eta), mn - slack - tol);
  }
}

TEST(Smooth, GradientsAreProbabilityVectors) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    const double eta = std::exp(std::uniform_real_distribution<double>(-2.0, 9.0)(rng));
    const auto v = random_vec(rng, n, 0.0, 10.0);
    for (const auto& sv : {smax_with_grad(v, eta), smin_with_grad(v, eta)}) {
      double sum = 0.0;
      for (double w : sv.weights) {
        EXPECT_GE(w, 0.0);
        sum += w;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Smooth, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  const auto v = random_vec(rng, 12, 0.0, 1.0);
  const double eta = 3.0, h = 1e-6;
  const auto gmax = smax_with_grad(v, eta);
  const auto gmin = smin_with_grad(v, eta);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto up = v, dn = v;
    up[i] += h;
    dn[i] -= h;
    EXPECT_NEAR((smax(up, eta) - smax(dn, eta)) / (2 * h), gmax.weights[i], 1e-7);
    EXPECT_NEAR((smin(up, eta) - smin(dn, eta)) / (2 * h), gmin.weights[i], 1e-7);
  }
}

TEST(Smooth, ValueFromWeightsMatchesPlainValue) {
  std::mt19937_64 rng(4);
  const auto v = random_vec(rng, 100, 0.0, 3.0);
  EXPECT_DOUBLE_EQ(smax_with_grad(v, 50.0).value, smax(v, 50.0));
  EXPECT_DOUBLE_EQ(smin_with_grad(v, 50.0).value, smin(v, 50.0));
}

TEST(Smooth, StableForLargeEta) {
  const std::vector<double> v{1000.0, 999.0, 0.0};
  const double eta = 1e5;
  EXPECT_NEAR(smax(v, eta), 1000.0, 1e-9);
  EXPECT_NEAR(smin(v, eta), 0.0, 1e-9);
  const auto g = smax_with_grad(v, eta);
  EXPECT_NEAR(g.weights[0], 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(g.weights[2]));
}

TEST(Smooth, SingletonIsExact) {
  const std::vector<double> v{0.37};
  EXPECT_EQ(smax(v, 123.0), 0.37);
  EXPECT_EQ(smin(v, 123.0), 0.37);
}

TEST(Smooth, EqualEntriesGiveLogShift) {
  const std::vector<double> v(8, 2.0);
  EXPECT_NEAR(smax(v, 2.0), 2.0 + std::log(8.0) / 2.0, 1e-14);
  EXPECT_NEAR(smin(v, 2.0), 2.0 - std::log(8.0) / 2.0, 1e-14);
}

TEST(Smooth, RejectsBadArguments) {
  const std::vector<double> empty;
  const std::vector<double> v{1.0};
  EXPECT_THROW(smax(empty, 1.0), std::invalid_argument);
  EXPECT_THROW(smin(v, 0.0), std::invalid_argument);
  EXPECT_THROW(smax(v, -1.0), std::invalid_argument);
  std::vector<double> w(2);
  EXPECT_THROW(smax_weights(v, 1.0, w), DimensionError);
}
