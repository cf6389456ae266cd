#pragma once

// Closed-form worst-case and bad-case instances with their analytic trajectories.
//
// All bundles start from x0 = e/sqrt(2) and u0 = +-x0/alpha with reference (0, 0),
// so ||x0||^2 + alpha^2 ||u0||^2 = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "splitlab/certificates.hpp"
#include "splitlab/errors.hpp"
#include "splitlab/functions.hpp"
#include "splitlab/solvers.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

enum class BundleKind { ExactWorstCase, BadExample };

inline std::string_view to_string(BundleKind k) {
  return k == BundleKind::ExactWorstCase ? "exact_worst_case" : "bad_example";
}

struct WorstCaseBundle {
  ProblemInstance instance;
  Algorithm algorithm{};
  std::size_t K = 0;
  std::vector<DenseVector> expected_x;  // x^1..x^K
  std::vector<DenseVector> expected_u;  // u^1..u^K
  DenseVector expected_ergodic_x;
  DenseVector expected_ergodic_u;
  double expected_gap = 0.0;
  ReferencePoint reference;
  BundleKind kind{};
};

namespace detail {

inline void check_bundle_args(std::size_t K, double alpha, std::size_t n, std::size_t unit_index) {
  if (K == 0) throw ArgumentError("worst-case bundle needs K >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("worst-case bundle needs alpha > 0");
  if (n == 0) throw ArgumentError("worst-case bundle needs n >= 1");
  if (unit_index < 1 || unit_index > n)
    throw ArgumentError("unit_index must lie in 1..n (got " + std::to_string(unit_index) + ")");
}

/// Shared DRS worst case; u0 = u0_sign * x0 / alpha.
inline WorstCaseBundle drs_worstcase(Algorithm algo, std::size_t K, double alpha, std::size_t n,
                                     std::size_t unit_index, double u0_sign) {
  check_bundle_args(K, alpha, n, unit_index);
  const double Kd = static_cast<double>(K);
  const DenseVector e = DenseVector::unit(n, unit_index - 1);
  const DenseVector x0 = e / std::sqrt(2.0);

  WorstCaseBundle b;
  b.algorithm = algo;
  b.K = K;
  b.kind = BundleKind::ExactWorstCase;
  b.instance = ProblemInstance{fn::ScaledEuclideanNorm{std::sqrt(2.0) / (alpha * (Kd + 1.0))}, fn::Zero{},
                               smooth::Zero{}, alpha, x0, u0_sign * x0 / alpha};
  for (std::size_t k = 1; k <= K; ++k) {
    b.expected_x.push_back(std::sqrt(2.0) * (1.0 - static_cast<double>(k) / (Kd + 1.0)) * e);
    b.expected_u.push_back(DenseVector(n));
  }
  // mean of sqrt(2)(1 - k/(K+1)) over k = 1..K is sqrt(2)/2
  b.expected_ergodic_x = (std::sqrt(2.0) / 2.0) * e;
  b.expected_ergodic_u = DenseVector(n);
  b.expected_gap = 1.0 / (alpha * (Kd + 1.0));
  b.reference = origin_reference(b.instance);
  return b;
}

}  // namespace detail

/// f = sqrt(2)/(a(K+1)) ||.||, g = 0, u0 = x0/a; gap = 1/(a(K+1)).
inline WorstCaseBundle make_drs_gf_worstcase(std::size_t K, double alpha, std::size_t n = 1,
                                             std::size_t unit_index = 1) {
  return detail::drs_worstcase(Algorithm::DrsGf, K, alpha, n, unit_index, +1.0);
}

/// As the DRS-gf worst case with u0 = -x0/a; the iterates coincide.
inline WorstCaseBundle make_drs_fg_worstcase(std::size_t K, double alpha, std::size_t n = 1,
                                             std::size_t unit_index = 1) {
  return detail::drs_worstcase(Algorithm::DrsFg, K, alpha, n, unit_index, -1.0);
}

/// DRS-fg worst case with h = 0 attached, run under DYS-fg.
inline WorstCaseBundle make_dys_fg_worstcase(std::size_t K, double alpha, std::size_t n = 1,
                                             std::size_t unit_index = 1) {
  WorstCaseBundle b = make_drs_fg_worstcase(K, alpha, n, unit_index);
  b.algorithm = Algorithm::DysFg;
  b.instance.h = smooth::Zero{};
  return b;
}

/// eta_K = sqrt(2)(K-1)/K^2.
inline double badcase_eta(std::size_t K) {
  const double Kd = static_cast<double>(K);
  return std::sqrt(2.0) * (Kd - 1.0) / (Kd * Kd);
}

/// DYS-gf bad case: f = (K-1) eta_K / a ||.||, g^* = eta_K ||.||, h = ||.||^2/(2a).
/// gap = (K^2 - K + 1)/(a K^3), strictly above 1/(a(K+1)).
inline WorstCaseBundle make_dys_gf_badcase(std::size_t K, double alpha, std::size_t n = 1,
                                           std::size_t unit_index = 1) {
  detail::check_bundle_args(K, alpha, n, unit_index);
  const double Kd = static_cast<double>(K);
  const double eta = badcase_eta(K);
  const double s2 = std::sqrt(2.0);
  const DenseVector e = DenseVector::unit(n, unit_index - 1);
  const DenseVector x0 = e / s2;

  WorstCaseBundle b;
  b.algorithm = Algorithm::DysGf;
  b.K = K;
  b.kind = BundleKind::BadExample;
  b.instance = ProblemInstance{fn::ScaledEuclideanNorm{(Kd - 1.0) * eta / alpha}, fn::BallIndicator{eta},
                               smooth::ScaledSquaredNorm{1.0 / alpha}, alpha, x0, x0 / alpha};
  for (std::size_t k = 1; k <= K; ++k) {
    if (k == 1) {
      b.expected_x.push_back(-(s2 - Kd * eta) * e);
      b.expected_u.push_back(((s2 - eta) / alpha) * e);
    } else {
      b.expected_x.push_back(DenseVector(n));
      b.expected_u.push_back(((Kd - static_cast<double>(k)) * eta / alpha) * e);
    }
  }
  b.expected_ergodic_x = (-s2 / (Kd * Kd)) * e;
  b.expected_ergodic_u = (s2 * (Kd * Kd - 2.0 * Kd + 3.0) / (2.0 * alpha * Kd * Kd)) * e;
  b.expected_gap = (Kd * Kd - Kd + 1.0) / (alpha * Kd * Kd * Kd);
  b.reference = origin_reference(b.instance);
  return b;
}

inline WorstCaseBundle make_bundle(Algorithm algo, std::size_t K, double alpha, std::size_t n = 1,
                                   std::size_t unit_index = 1) {
  switch (algo) {
    case Algorithm::DrsGf: return make_drs_gf_worstcase(K, alpha, n, unit_index);
    case Algorithm::DrsFg: return make_drs_fg_worstcase(K, alpha, n, unit_index);
    case Algorithm::DysGf: return make_dys_gf_badcase(K, alpha, n, unit_index);
    case Algorithm::DysFg: return make_dys_fg_worstcase(K, alpha, n, unit_index);
  }
  throw ArgumentError("unknown algorithm");
}

inline constexpr double kBundleTol = 1e-10;

struct BundleVerification {
  double max_x_dev = 0.0;
  double max_u_dev = 0.0;
  double ergodic_dev = 0.0;
  double gap = 0.0;
  double gap_dev = 0.0;  // |gap - expected| / max(1, |expected|)
  bool pass = false;
};

/// Compares a solver trace with the bundle's closed forms.
inline BundleVerification verify_bundle(const WorstCaseBundle& bundle, const SolverTrace& trace) {
  if (trace.algorithm != bundle.algorithm)
    throw ArgumentError("verify_bundle: trace algorithm " + std::string(to_string(trace.algorithm)) +
                        " does not match bundle algorithm " + std::string(to_string(bundle.algorithm)));
  if (trace.K() != bundle.K) throw ArgumentError("verify_bundle: horizon mismatch");
  if (trace.instance.dimension() != bundle.instance.dimension())
    throw ArgumentError("verify_bundle: dimension mismatch");

  BundleVerification v;
  for (std::size_t k = 0; k < bundle.K; ++k) {
    v.max_x_dev = std::max(v.max_x_dev, max_abs_diff(trace.records[k].x, bundle.expected_x[k]));
    v.max_u_dev = std::max(v.max_u_dev, max_abs_diff(trace.records[k].u, bundle.expected_u[k]));
  }
  v.ergodic_dev = std::max(max_abs_diff(trace.ergodic_x, bundle.expected_ergodic_x),
                           max_abs_diff(trace.ergodic_u, bundle.expected_ergodic_u));
  v.gap = gap(trace.instance, trace, bundle.reference);
  v.gap_dev = std::abs(v.gap - bundle.expected_gap) / std::max(1.0, std::abs(bundle.expected_gap));
  v.pass = v.max_x_dev <= kBundleTol && v.max_u_dev <= kBundleTol && v.ergodic_dev <= kBundleTol &&
           v.gap_dev <= kBundleTol;
  return v;
}

}  // namespace splitlab
