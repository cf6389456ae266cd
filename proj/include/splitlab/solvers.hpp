#pragma once

// The four splitting recurrences, written in (x, u) form:
//
//   DRS-gf  u+ = prox_{g*/a}(u + x/a)              x+ = prox_{af}(x - a(2u+ - u))
//   DRS-fg  x+ = prox_{af}(x - a u)                u+ = prox_{g*/a}(u + (2x+ - x)/a)
//   DYS-gf  u+ as DRS-gf, then                     x+ = prox_{af}(x - a(2u+ - u) - a grad h(p+))
//   DYS-fg  x+ = prox_{af}(x - a(u + grad h(x)))   u+ = prox_{g*/a}(u + (2x+ - x + a grad h(x) - a grad h(x+))/a)
//
// Every run records, per iteration k = 1..K, the iterates together with the
// conjugate subgradient p^k, the prox-induced subgradient of f at x^k, the
// gradient of h and the aggregated vector v^k consumed by the certificates.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitlab/errors.hpp"
#include "splitlab/functions.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

enum class Algorithm { DrsGf, DrsFg, DysGf, DysFg };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::DrsGf, Algorithm::DrsFg, Algorithm::DysGf,
                                               Algorithm::DysFg};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::DrsGf: return "drs_gf";
    case Algorithm::DrsFg: return "drs_fg";
    case Algorithm::DysGf: return "dys_gf";
    case Algorithm::DysFg: return "dys_fg";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view tag) {
  for (Algorithm a : kAllAlgorithms)
    if (to_string(a) == tag) return a;
  throw ConfigError("unknown algorithm '" + std::string(tag) + "'");
}

inline bool is_dys(Algorithm a) { return a == Algorithm::DysGf || a == Algorithm::DysFg; }
/// g-first variants have p^k = x^k + a v^k; f-first variants have p^k = x^k - a v^k.
inline bool is_g_first(Algorithm a) { return a == Algorithm::DrsGf || a == Algorithm::DysGf; }

/// Relative slack accepted in the DYS step-size rule alpha * L == 1.
inline constexpr double kStepRuleTol = 1e-12;

struct ProblemInstance {
  ProxFunction f;
  ProxFunction g;
  SmoothFunction h;  // zero smooth function when absent
  double alpha = 1.0;
  DenseVector x0;
  DenseVector u0;

  std::size_t dimension() const { return x0.size(); }

  /// Shape and sign checks shared by every algorithm.
  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite positive number");
    if (x0.size() == 0) throw ArgumentError("x0 must have dimension >= 1");
    if (u0.size() != x0.size()) throw ArgumentError("x0 and u0 dimensions differ");
    f.check_dimension(dimension());
    g.check_dimension(dimension());
    h.check_dimension(dimension());
  }

  /// Requirements of `algo` on h and alpha.
  void validate_for(Algorithm algo) const {
    validate();
    if (!is_dys(algo)) {
      if (!h.is_zero()) throw ConfigError(std::string(to_string(algo)) + " requires h = zero");
      return;
    }
    const double L = h.lipschitz();
    if (L > 0.0 && std::abs(alpha * L - 1.0) > kStepRuleTol)
      throw ConfigError(std::string(to_string(algo)) + " requires alpha = 1/L (alpha = " + std::to_string(alpha) +
                        ", L = " + std::to_string(L) + ")");
  }
};

struct IterateRecord {
  std::size_t k = 0;
  DenseVector x;
  DenseVector u;
  DenseVector p;
  DenseVector subf;
  std::optional<DenseVector> hgrad_point;  // p^k for DYS-gf, x^k for DYS-fg, absent for DRS
  DenseVector hgrad;                       // zero vector for DRS
  DenseVector v;
};

struct SolverTrace {
  Algorithm algorithm{};
  ProblemInstance instance;
  std::vector<IterateRecord> records;
  DenseVector ergodic_x;
  DenseVector ergodic_u;

  std::size_t K() const { return records.size(); }
};

/// (1/K) sum_{k=1..K} (x^k, u^k), accumulated in increasing k with compensated sums.
inline std::pair<DenseVector, DenseVector> ergodic_average(const std::vector<IterateRecord>& records, std::size_t K) {
  if (records.empty() || K == 0) throw ArgumentError("ergodic_average: empty record list");
  if (K > records.size()) throw ArgumentError("ergodic_average: K exceeds number of records");
  VectorAccumulator sx(records.front().x.size()), su(records.front().u.size());
  for (std::size_t k = 0; k < K; ++k) {
    if (records[k].k != k + 1) throw ArgumentError("ergodic_average: records are not ordered 1..K");
    sx.add(records[k].x);
    su.add(records[k].u);
  }
  const double inv = static_cast<double>(K);
  return {sx.value() / inv, su.value() / inv};
}

namespace detail {

inline void check_run_args(const ProblemInstance& inst, Algorithm algo, std::size_t K) {
  if (K == 0) throw ArgumentError("horizon K must be >= 1");
  inst.validate_for(algo);
}

inline SolverTrace finish(Algorithm algo, const ProblemInstance& inst, std::vector<IterateRecord> records) {
  SolverTrace t{algo, inst, std::move(records), {}, {}};
  auto [xb, ub] = ergodic_average(t.records, t.records.size());
  t.ergodic_x = std::move(xb);
  t.ergodic_u = std::move(ub);
  return t;
}

}  // namespace detail

inline SolverTrace drs_gf_run(const ProblemInstance& inst, std::size_t K) {
  detail::check_run_args(inst, Algorithm::DrsGf, K);
  const double a = inst.alpha;
  const std::size_t n = inst.dimension();
  std::vector<IterateRecord> recs;
  recs.reserve(K);
  DenseVector x = inst.x0, u = inst.u0;
  for (std::size_t k = 0; k < K; ++k) {
    DenseVector u_next = conj_prox_via_moreau(inst.g, a, u + x / a);
    DenseVector p = (a * u + x) - a * u_next;
    DenseVector arg = x - a * (2.0 * u_next - u);
    DenseVector x_next = inst.f.prox(a, arg);
    DenseVector subf = (arg - x_next) / a;
    DenseVector v = subf + u_next;
    recs.push_back({k + 1, x_next, u_next, std::move(p), std::move(subf), std::nullopt, DenseVector(n), std::move(v)});
    x = std::move(x_next);
    u = std::move(u_next);
  }
  return detail::finish(Algorithm::DrsGf, inst, std::move(recs));
}

inline SolverTrace drs_fg_run(const ProblemInstance& inst, std::size_t K) {
  detail::check_run_args(inst, Algorithm::DrsFg, K);
  const double a = inst.alpha;
  const std::size_t n = inst.dimension();
  std::vector<IterateRecord> recs;
  recs.reserve(K);
  DenseVector x = inst.x0, u = inst.u0;
  for (std::size_t k = 0; k < K; ++k) {
    DenseVector arg = x - a * u;
    DenseVector x_next = inst.f.prox(a, arg);
    DenseVector subf = (arg - x_next) / a;
    DenseVector u_next = conj_prox_via_moreau(inst.g, a, u + (2.0 * x_next - x) / a);
    DenseVector p = x_next + (x_next - x) + a * (u - u_next);
    DenseVector v = subf + u_next;
    recs.push_back({k + 1, x_next, u_next, std::move(p), std::move(subf), std::nullopt, DenseVector(n), std::move(v)});
    x = std::move(x_next);
    u = std::move(u_next);
  }
  return detail::finish(Algorithm::DrsFg, inst, std::move(recs));
}

inline SolverTrace dys_gf_run(const ProblemInstance& inst, std::size_t K) {
  detail::check_run_args(inst, Algorithm::DysGf, K);
  const double a = inst.alpha;
  std::vector<IterateRecord> recs;
  recs.reserve(K);
  DenseVector x = inst.x0, u = inst.u0;
  for (std::size_t k = 0; k < K; ++k) {
    DenseVector u_next = conj_prox_via_moreau(inst.g, a, u + x / a);
    DenseVector p = (a * u + x) - a * u_next;
    DenseVector gp = inst.h.grad(p);
    DenseVector arg = x - a * (2.0 * u_next - u) - a * gp;
    DenseVector x_next = inst.f.prox(a, arg);
    DenseVector subf = (arg - x_next) / a;
    DenseVector v = subf + u_next + gp;
    recs.push_back({k + 1, x_next, u_next, p, std::move(subf), p, std::move(gp), std::move(v)});
    x = std::move(x_next);
    u = std::move(u_next);
  }
  return detail::finish(Algorithm::DysGf, inst, std::move(recs));
}

inline SolverTrace dys_fg_run(const ProblemInstance& inst, std::size_t K) {
  detail::check_run_args(inst, Algorithm::DysFg, K);
  const double a = inst.alpha;
  std::vector<IterateRecord> recs;
  recs.reserve(K);
  DenseVector x = inst.x0, u = inst.u0;
  DenseVector gx = inst.h.grad(x);
  for (std::size_t k = 0; k < K; ++k) {
    DenseVector arg = x - a * (u + gx);
    DenseVector x_next = inst.f.prox(a, arg);
    DenseVector subf = (arg - x_next) / a;
    DenseVector gx_next = inst.h.grad(x_next);
    DenseVector u_next = conj_prox_via_moreau(inst.g, a, u + ((2.0 * x_next - x) + a * gx - a * gx_next) / a);
    DenseVector p = x_next + (x_next - x) + a * ((gx + u) - (gx_next + u_next));
    DenseVector v = subf + u_next + gx_next;
    recs.push_back({k + 1, x_next, u_next, std::move(p), std::move(subf), x_next, gx_next, std::move(v)});
    x = std::move(x_next);
    u = std::move(u_next);
    gx = std::move(gx_next);
  }
  return detail::finish(Algorithm::DysFg, inst, std::move(recs));
}

inline SolverTrace run(Algorithm algo, const ProblemInstance& inst, std::size_t K) {
  switch (algo) {
    case Algorithm::DrsGf: return drs_gf_run(inst, K);
    case Algorithm::DrsFg: return drs_fg_run(inst, K);
    case Algorithm::DysGf: return dys_gf_run(inst, K);
    case Algorithm::DysFg: return dys_fg_run(inst, K);
  }
  throw ArgumentError("unknown algorithm");
}

}  // namespace splitlab
