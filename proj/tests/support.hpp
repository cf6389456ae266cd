#pragma once

// Shared helpers for the test suites: random catalogue members, domain
// sampling and a derivative-free 1-D minimiser used as a brute-force oracle.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "splitlab/splitlab.hpp"

namespace testing_support {

using namespace splitlab;

inline DenseVector normal_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> uniform_list(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& c : v) c = uniform(rng, lo, hi);
  return v;
}

/// One member of every catalogue entry, with random parameters for dimension n.
inline std::vector<ProxFunction> random_catalogue(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = uniform(rng, -2.0, 0.5);
    hi[i] = lo[i] + uniform(rng, 0.0, 2.0);
  }
  std::vector<double> b(n);
  for (double& c : b) c = std::normal_distribution<double>(0.0, 1.0)(rng);
  return {fn::Zero{},
          fn::ScaledEuclideanNorm{uniform(rng, 0.1, 2.0)},
          fn::IndicatorOrigin{},
          fn::ScaledSquaredNorm{uniform(rng, 0.1, 4.0)},
          fn::SeparableQuadratic{uniform_list(rng, n, 0.1, 5.0), b},
          fn::L1Norm{uniform(rng, 0.1, 2.0)},
          fn::BoxIndicator{lo, hi},
          fn::BallIndicator{uniform(rng, 0.1, 2.0)}};
}

inline std::vector<SmoothFunction> random_smooth_catalogue(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> b(n), b2(n);
  for (double& c : b) c = std::normal_distribution<double>(0.0, 1.0)(rng);
  for (double& c : b2) c = std::normal_distribution<double>(0.0, 1.0)(rng);
  return {smooth::Zero{}, smooth::ScaledSquaredNorm{uniform(rng, 0.1, 4.0)},
          smooth::SeparableQuadratic{uniform_list(rng, n, 0.1, 5.0), b},
          smooth::Huber{uniform_list(rng, n, 0.1, 5.0), b2}};
}

/// A random point of dom f.
inline DenseVector sample_domain(std::mt19937_64& rng, const ProxFunction& f, std::size_t n) {
  const auto& var = f.variant();
  if (std::holds_alternative<fn::IndicatorOrigin>(var)) return DenseVector(n);
  if (const auto* box = std::get_if<fn::BoxIndicator>(&var)) {
    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double l = box->lo.size() == 1 ? box->lo[0] : box->lo[i];
      const double h = box->hi.size() == 1 ? box->hi[0] : box->hi[i];
      x[i] = uniform(rng, l, h);
    }
    return x;
  }
  if (const auto* ball = std::get_if<fn::BallIndicator>(&var)) {
    DenseVector d = normal_vector(rng, n);
    const double r = ball->eta * std::pow(uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(n));
    return norm(d) > 0.0 ? (r / norm(d)) * d : d;
  }
  return normal_vector(rng, n, 2.0);
}

/// Golden-section minimiser of a convex function on [a, b].
inline double golden_min(const std::function<double(double)>& phi, double a, double b, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
    }
  }
  return fc <= fd ? c : d;
}

inline double value_or_inf(const ExtendedReal& v) { return v.value(); }

}  // namespace testing_support
