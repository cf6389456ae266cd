#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "splitlab/certificates.hpp"
#include "splitlab/errors.hpp"
#include "splitlab/functions.hpp"
#include "splitlab/solvers.hpp"

namespace splitlab {

/// Seeded instance families. Names are the tags accepted on the command line.
enum class Family {
  QuadraticL1,           // f separable quadratic, g = eta ||.||_1
  QuadraticBall,         // f separable quadratic, g = indicator of the eta-ball
  NormZero,              // f = eta ||.||, g = 0
  QuadraticL1QuadraticH, // quadratic + l1, h = (c/2)||.||^2, alpha = 1/c
  QuadraticZeroQuadraticH,  // quadratic f, g = 0, h = (c/2)||.||^2, alpha = 1/c
  QuadraticL1HuberH,     // quadratic + l1, h = separable Huber, alpha = 1/L
};

inline constexpr Family kAllFamilies[] = {Family::QuadraticL1,           Family::QuadraticBall,
                                          Family::NormZero,              Family::QuadraticL1QuadraticH,
                                          Family::QuadraticZeroQuadraticH, Family::QuadraticL1HuberH};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::QuadraticL1: return "quadratic+l1";
    case Family::QuadraticBall: return "quadratic+ball-indicator";
    case Family::NormZero: return "norm+zero";
    case Family::QuadraticL1QuadraticH: return "quadratic+l1+quadratic-h";
    case Family::QuadraticZeroQuadraticH: return "quadratic+zero+quadratic-h";
    case Family::QuadraticL1HuberH: return "quadratic+l1+huber-h";
  }
  return "?";
}

inline Family parse_family(std::string_view tag) {
  for (Family f : kAllFamilies)
    if (to_string(f) == tag) return f;
  throw ConfigError("unknown random family '" + std::string(tag) + "'");
}

inline bool family_has_h(Family f) {
  return f == Family::QuadraticL1QuadraticH || f == Family::QuadraticZeroQuadraticH || f == Family::QuadraticL1HuberH;
}

struct GeneratorSpec {
  Family family = Family::QuadraticL1;
  std::size_t dim = 3;
};

struct RandomInstance {
  ProblemInstance instance;
  /// A random admissible reference (x in dom f, u in dom g^*).
  ReferencePoint random_reference;
};

/// Deterministic instance from (seed, spec). x0, u0 are normalised so that
/// ||x0||^2 + alpha^2 ||u0||^2 = 1.
inline RandomInstance random_instance(std::uint64_t seed, const GeneratorSpec& spec) {
  if (spec.dim == 0) throw ConfigError("random instance dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const std::size_t n = spec.dim;
  auto normal_vec = [&] {
    DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
  };
  auto uniform_list = [&](double lo, double hi) {
    std::vector<double> v(n);
    for (double& c : v) c = uniform(lo, hi);
    return v;
  };

  ProblemInstance inst;
  if (spec.family == Family::NormZero) {
    inst.f = fn::ScaledEuclideanNorm{uniform(0.1, 2.0)};
  } else {
    auto a = uniform_list(0.1, 5.0);
    std::vector<double> b(n);
    for (double& c : b) c = normal(rng);
    inst.f = fn::SeparableQuadratic{std::move(a), std::move(b)};
  }

  double g_eta = 0.0;
  switch (spec.family) {
    case Family::QuadraticL1:
    case Family::QuadraticL1QuadraticH:
    case Family::QuadraticL1HuberH:
      g_eta = uniform(0.1, 2.0);
      inst.g = fn::L1Norm{g_eta};
      break;
    case Family::QuadraticBall:
      g_eta = uniform(0.1, 2.0);
      inst.g = fn::BallIndicator{g_eta};
      break;
    case Family::NormZero:
    case Family::QuadraticZeroQuadraticH:
      inst.g = fn::Zero{};
      break;
  }

  if (spec.family == Family::QuadraticL1HuberH) {
    auto a = uniform_list(0.2, 4.0);
    std::vector<double> b(n);
    for (double& c : b) c = normal(rng);
    smooth::Huber h{std::move(a), std::move(b)};
    inst.alpha = 1.0 / h.lipschitz();
    inst.h = std::move(h);
  } else if (family_has_h(spec.family)) {
    const double c = uniform(0.2, 4.0);
    inst.h = smooth::ScaledSquaredNorm{c};
    inst.alpha = 1.0 / c;
  } else {
    inst.h = smooth::Zero{};
    inst.alpha = uniform(0.2, 5.0);
  }

  DenseVector x0 = normal_vec();
  DenseVector u0 = normal_vec();
  const double scale = std::sqrt(squared_norm(x0) + inst.alpha * inst.alpha * squared_norm(u0));
  inst.x0 = x0 / scale;
  inst.u0 = u0 / scale;
  inst.validate();

  DenseVector x_ref = normal_vec();
  DenseVector u_ref(n);
  if (spec.family == Family::QuadraticBall) {
    u_ref = normal_vec();
  } else if (g_eta > 0.0) {
    for (std::size_t i = 0; i < n; ++i) u_ref[i] = uniform(-g_eta, g_eta);
  }
  ReferencePoint ref = make_reference(inst, std::move(x_ref), std::move(u_ref));
  return {std::move(inst), std::move(ref)};
}

/// Admissible reference near a saddle point: the last iterate of a long DYS-gf
/// run (identical to DRS-gf when h = 0).
inline ReferencePoint near_saddle_reference(const ProblemInstance& inst, std::size_t iterations = 10000) {
  ProblemInstance copy = inst;
  SolverTrace t = dys_gf_run(copy, iterations);
  return make_reference(inst, t.records.back().x, t.records.back().u);
}

}  // namespace splitlab
