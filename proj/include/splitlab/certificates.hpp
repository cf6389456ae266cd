#pragma once

// Lagrangian, primal-dual gap, and the exact equality decompositions
//
//   gap - rate * distance_sq = I_f + I_g + I_h - S_1 - S_2 - S_h
//
// for each of the four splitting variants. Each term is evaluated directly from
// its defining sums over the trace; the left-hand side is evaluated
// independently through the Lagrangian, so `residual` compares two separate
// computations.
//
// Signs: I_f, I_g, I_h are sums of convexity (or smoothness) brackets and are
// <= 0; S_1, S_2, S_h are weighted sums of squares and are >= 0.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitlab/errors.hpp"
#include "splitlab/functions.hpp"
#include "splitlab/solvers.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

/// The (x, u) at which the gap function is evaluated, with p in d g^*(u).
struct ReferencePoint {
  DenseVector x_ref;
  DenseVector u_ref;
  DenseVector p_ref;
};

/// Builds a reference point, selecting p_ref from g's conjugate subgradient.
/// Throws DomainError when x is outside dom f or u outside dom g^*.
inline ReferencePoint make_reference(const ProblemInstance& inst, DenseVector x, DenseVector u) {
  if (x.size() != inst.dimension() || u.size() != inst.dimension())
    throw ArgumentError("reference point dimension mismatch");
  if (!inst.f.in_domain(x)) throw DomainError("reference x is outside dom f; gap is +inf");
  auto p = inst.g.conj_subgrad(u);
  if (!p) throw DomainError("reference u is outside dom g*; gap is +inf");
  return {std::move(x), std::move(u), std::move(*p)};
}

inline ReferencePoint origin_reference(const ProblemInstance& inst) {
  const std::size_t n = inst.dimension();
  return make_reference(inst, DenseVector(n), DenseVector(n));
}

/// L(x, u) = f(x) + h(x) + <u, x> - g^*(u), with +inf when x is outside dom f.
/// When x is in dom f but u is outside dom g^*, the value is -inf; that case is
/// reported as nullopt because ExtendedReal carries only +inf.
inline std::optional<ExtendedReal> lagrangian(const ProblemInstance& inst, const DenseVector& x,
                                              const DenseVector& u) {
  const ExtendedReal fx = inst.f.eval(x);
  if (fx.is_infinite()) return ExtendedReal::infinity();
  const ExtendedReal gs = inst.g.conj_eval(u);
  if (gs.is_infinite()) return std::nullopt;
  return ExtendedReal(fx.value() + inst.h.eval(x) + dot(u, x) - gs.value());
}

/// L(xbar^K, u_ref) - L(x_ref, ubar^K).
inline double gap(const ProblemInstance& inst, const SolverTrace& trace, const ReferencePoint& ref) {
  const auto left = lagrangian(inst, trace.ergodic_x, ref.u_ref);
  const auto right = lagrangian(inst, ref.x_ref, trace.ergodic_u);
  if (!left || left->is_infinite()) throw DomainError("gap: L(xbar, u) is not finite");
  if (!right || right->is_infinite()) throw DomainError("gap: L(x, ubar) is not finite");
  return left->value() - right->value();
}

inline double distance_sq(const ProblemInstance& inst, const ReferencePoint& ref) {
  return squared_norm(inst.x0 - ref.x_ref) + inst.alpha * inst.alpha * squared_norm(inst.u0 - ref.u_ref);
}

/// Rate constant c(K) in  gap <= c(K) * distance_sq.
inline double rate_factor(Algorithm algo, double alpha, std::size_t K) {
  const double k = static_cast<double>(K);
  return algo == Algorithm::DysGf ? 1.0 / (alpha * k) : 1.0 / (alpha * (k + 1.0));
}

struct DecompositionReport {
  Algorithm algorithm{};
  std::size_t K = 0;
  double lhs = 0.0;
  double i_f = 0.0;
  double i_g = 0.0;
  double i_h = 0.0;
  double s_1 = 0.0;
  double s_2 = 0.0;
  double s_h = 0.0;
  double residual = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double distance_sq = 0.0;

  double rhs() const { return i_f + i_g + i_h - s_1 - s_2 - s_h; }
};

namespace detail {

inline double fin(const ExtendedReal& v, const char* what) { return v.finite_or_throw(what); }

/// Terms shared by every variant: gap, distance, I_f, I_g.
struct CommonTerms {
  double gap = 0.0;
  double distance_sq = 0.0;
  double i_f = 0.0;
  double i_g = 0.0;
};

inline CommonTerms common_terms(const SolverTrace& trace, const ReferencePoint& ref,
                                const std::optional<DenseVector>& pbar_override) {
  const ProblemInstance& inst = trace.instance;
  const auto& recs = trace.records;
  const std::size_t K = recs.size();
  if (K == 0) throw ArgumentError("decomposition needs a non-empty trace");
  const double invK = 1.0 / static_cast<double>(K);
  const DenseVector& xb = trace.ergodic_x;
  const DenseVector& ub = trace.ergodic_u;

  CommonTerms out;
  out.gap = gap(inst, trace, ref);
  out.distance_sq = distance_sq(inst, ref);

  // I_f: brackets at xbar (with an analytic subgradient of f at xbar) and at x_ref.
  const double f_xb = fin(inst.f.eval(xb), "f(xbar)");
  const double f_xr = fin(inst.f.eval(ref.x_ref), "f(x_ref)");
  const DenseVector s_xb = inst.f.subgrad(xb);
  CompensatedSum if1, if2;
  for (const auto& r : recs) {
    const double f_k = fin(inst.f.eval(r.x), "f(x^k)");
    if1 += f_xb - f_k + dot(s_xb, r.x - xb);
    if2 += f_k - f_xr + dot(r.subf, ref.x_ref - r.x);
  }
  out.i_f = invK * if1.value() + invK * if2.value();

  // I_g: brackets using u^k in d g(p^k), ubar in d g(pbar), u_ref in d g(p_ref).
  DenseVector pbar;
  if (pbar_override) {
    pbar = *pbar_override;
  } else {
    auto sel = inst.g.conj_subgrad(ub);
    if (!sel) throw DomainError("ubar is outside dom g*");
    pbar = std::move(*sel);
  }
  const double g_pb = fin(inst.g.eval(pbar), "g(pbar)");
  const double g_pr = fin(inst.g.eval(ref.p_ref), "g(p_ref)");
  CompensatedSum ig1, ig2;
  for (const auto& r : recs) {
    const double g_k = fin(inst.g.eval(r.p), "g(p^k)");
    ig1 += g_k - g_pb + dot(r.u, pbar - r.p);
    ig2 += g_pr - g_k + dot(ref.u_ref, r.p - ref.p_ref);
  }
  out.i_g = invK * ig1.value() + invK * ig2.value();
  return out;
}

inline DenseVector sum_v(const std::vector<IterateRecord>& recs) {
  VectorAccumulator acc(recs.front().v.size());
  for (const auto& r : recs) acc.add(r.v);
  return acc.value();
}

inline DenseVector mean_hgrad(const std::vector<IterateRecord>& recs) {
  VectorAccumulator acc(recs.front().hgrad.size());
  for (const auto& r : recs) acc.add(r.hgrad);
  return acc.value() / static_cast<double>(recs.size());
}

/// (a / (2K^2)) sum_k sum_{l<k} ||v^k - v^l||^2.
inline double s2_plain(const std::vector<IterateRecord>& recs, double alpha) {
  const double K = static_cast<double>(recs.size());
  CompensatedSum s;
  for (std::size_t k = 0; k < recs.size(); ++k)
    for (std::size_t l = 0; l < k; ++l) s += squared_norm(recs[k].v - recs[l].v);
  return alpha / (2.0 * K * K) * s.value();
}

/// (a / (2K^2)) sum_k sum_{l<k} ( ||(v^k - G^k) - (v^l - G^l)||^2 + ||G^k - G^l||^2 ), G = recorded grad h.
inline double s2_split(const std::vector<IterateRecord>& recs, double alpha) {
  const double K = static_cast<double>(recs.size());
  CompensatedSum s;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const DenseVector wk = recs[k].v - recs[k].hgrad;
    for (std::size_t l = 0; l < k; ++l) {
      s += squared_norm(wk - (recs[l].v - recs[l].hgrad));
      s += squared_norm(recs[k].hgrad - recs[l].hgrad);
    }
  }
  return alpha / (2.0 * K * K) * s.value();
}

/// Smoothness bracket h(y) - h(z) + <grad h(y), z - y> + (a/2)||grad h(y) - grad h(z)||^2 (<= 0 at a = 1/L).
inline double smooth_bracket(const SmoothFunction& h, double alpha, const DenseVector& y, const DenseVector& gy,
                             const DenseVector& z, const DenseVector& gz) {
  return h.eval(y) - h.eval(z) + dot(gy, z - y) + 0.5 * alpha * squared_norm(gy - gz);
}

inline DecompositionReport finish_report(Algorithm algo, std::size_t K, double alpha, const CommonTerms& c,
                                         double i_h, double s_1, double s_2, double s_h) {
  DecompositionReport r;
  r.algorithm = algo;
  r.K = K;
  r.gap = c.gap;
  r.distance_sq = c.distance_sq;
  r.bound = rate_factor(algo, alpha, K) * c.distance_sq;
  r.lhs = r.gap - r.bound;
  r.i_f = c.i_f;
  r.i_g = c.i_g;
  r.i_h = i_h;
  r.s_1 = s_1;
  r.s_2 = s_2;
  r.s_h = s_h;
  r.residual = std::abs(r.lhs - r.rhs());
  return r;
}

inline DecompositionReport decompose_drs(const SolverTrace& trace, const ReferencePoint& ref, Algorithm tag,
                                         double u_sign, const std::optional<DenseVector>& pbar_override) {
  const auto& inst = trace.instance;
  const auto& recs = trace.records;
  const double a = inst.alpha;
  const double K = static_cast<double>(recs.size());
  const CommonTerms c = common_terms(trace, ref, pbar_override);

  const DenseVector sv = sum_v(recs);
  const double coef = (K + 1.0) / (2.0 * K);
  const double s_1 = (squared_norm(inst.x0 - ref.x_ref - (a * coef) * sv) +
                      a * a * squared_norm(inst.u0 - ref.u_ref - (u_sign * coef) * sv)) /
                     (a * (K + 1.0));
  const double s_2 = s2_plain(recs, a);
  return finish_report(tag, recs.size(), a, c, 0.0, s_1, s_2, 0.0);
}

}  // namespace detail

/// DRS-gf identity with rate 1/(a(K+1)). Accepts any trace whose v^k = subf^k + u^k.
inline DecompositionReport decompose_drs_gf(const SolverTrace& trace, const ReferencePoint& ref,
                                            const std::optional<DenseVector>& pbar_override = std::nullopt) {
  return detail::decompose_drs(trace, ref, Algorithm::DrsGf, +1.0, pbar_override);
}

/// DRS-fg identity: as DRS-gf with the sign inside the u-square of S_1 flipped.
inline DecompositionReport decompose_drs_fg(const SolverTrace& trace, const ReferencePoint& ref,
                                            const std::optional<DenseVector>& pbar_override = std::nullopt) {
  return detail::decompose_drs(trace, ref, Algorithm::DrsFg, -1.0, pbar_override);
}

/// DYS-gf identity with rate 1/(aK); requires a = 1/L (or h = 0).
inline DecompositionReport decompose_dys_gf(const SolverTrace& trace, const ReferencePoint& ref,
                                            const std::optional<DenseVector>& pbar_override = std::nullopt) {
  if (trace.algorithm != Algorithm::DysGf) throw ArgumentError("decompose_dys_gf needs a dys_gf trace");
  const auto& inst = trace.instance;
  const auto& recs = trace.records;
  const auto& h = inst.h;
  const double a = inst.alpha;
  const double K = static_cast<double>(recs.size());
  const double invK = 1.0 / K;
  const detail::CommonTerms c = detail::common_terms(trace, ref, pbar_override);
  const DenseVector& xb = trace.ergodic_x;
  const DenseVector g_xb = h.grad(xb);
  const DenseVector g_xr = h.grad(ref.x_ref);

  // I_h: smoothness brackets between xbar and p^k, and between p^k and x_ref.
  CompensatedSum ih1, ih2;
  for (const auto& r : recs) {
    ih1 += h.eval(xb) - h.eval(r.p) + dot(g_xb, r.p - xb) + 0.5 * a * squared_norm(g_xb - r.hgrad);
    ih2 += h.eval(r.p) - h.eval(ref.x_ref) + dot(r.hgrad, ref.x_ref - r.p) + 0.5 * a * squared_norm(g_xr - r.hgrad);
  }
  const double i_h = invK * ih1.value() + invK * ih2.value();

  VectorAccumulator fu(inst.dimension());
  for (const auto& r : recs) fu.add(r.subf + r.u);
  const DenseVector mean_hg = detail::mean_hgrad(recs);
  const double s_h = 0.5 * a * squared_norm(g_xb + fu.value() * invK) + 0.5 * a * squared_norm(g_xr - mean_hg);

  const DenseVector sv = detail::sum_v(recs);
  const double s_1 =
      (squared_norm(inst.x0 - ref.x_ref - (0.5 * a) * sv) + a * a * squared_norm(inst.u0 - ref.u_ref - 0.5 * sv)) /
      (a * K);
  const double s_2 = detail::s2_split(recs, a);
  return detail::finish_report(Algorithm::DysGf, recs.size(), a, c, i_h, s_1, s_2, s_h);
}

/// DYS-fg identity with rate 1/(a(K+1)); requires a = 1/L (or h = 0).
/// The ||grad h(x0) - grad h(x_ref)||^2 term of S_1 carries weight a/(K+1).
inline DecompositionReport decompose_dys_fg(const SolverTrace& trace, const ReferencePoint& ref,
                                            const std::optional<DenseVector>& pbar_override = std::nullopt) {
  if (trace.algorithm != Algorithm::DysFg) throw ArgumentError("decompose_dys_fg needs a dys_fg trace");
  const auto& inst = trace.instance;
  const auto& recs = trace.records;
  const auto& h = inst.h;
  const double a = inst.alpha;
  const double K = static_cast<double>(recs.size());
  const double invK = 1.0 / K;
  const detail::CommonTerms c = detail::common_terms(trace, ref, pbar_override);
  const DenseVector& xb = trace.ergodic_x;
  const DenseVector& x0 = inst.x0;
  const DenseVector& xr = ref.x_ref;
  const DenseVector g_xb = h.grad(xb);
  const DenseVector g_xr = h.grad(xr);
  const DenseVector g_x0 = h.grad(x0);

  CompensatedSum b_bar, b_ref, b_x0;
  for (const auto& r : recs) {
    b_bar += detail::smooth_bracket(h, a, xb, g_xb, r.x, r.hgrad);
    b_ref += detail::smooth_bracket(h, a, r.x, r.hgrad, xr, g_xr);
    b_x0 += detail::smooth_bracket(h, a, r.x, r.hgrad, x0, g_x0);
  }
  const double i_h = invK * b_bar.value() + (K - 1.0) / (K * (K + 1.0)) * b_ref.value() +
                     2.0 / (K + 1.0) * detail::smooth_bracket(h, a, x0, g_x0, xr, g_xr) +
                     2.0 / (K * (K + 1.0)) * b_x0.value();

  const DenseVector mean_hg = detail::mean_hgrad(recs);
  const double s_h = 0.5 * a * squared_norm(g_xb - mean_hg) +
                     a * (K - 1.0) / (2.0 * (K + 1.0)) * squared_norm(g_xr - mean_hg);

  const DenseVector sv = detail::sum_v(recs);
  const double coef = (K + 1.0) / (2.0 * K);
  const double s_1 = (squared_norm(x0 - xr - (a * coef) * sv - a * (g_x0 - mean_hg)) / a +
                      a * squared_norm(inst.u0 - ref.u_ref + coef * sv)) /
                         (K + 1.0) +
                     a / (K + 1.0) * squared_norm(g_x0 - g_xr);
  const double s_2 = detail::s2_split(recs, a);
  return detail::finish_report(Algorithm::DysFg, recs.size(), a, c, i_h, s_1, s_2, s_h);
}

/// The identity matching the trace's own algorithm.
inline DecompositionReport decompose(const SolverTrace& trace, const ReferencePoint& ref,
                                     const std::optional<DenseVector>& pbar_override = std::nullopt) {
  switch (trace.algorithm) {
    case Algorithm::DrsGf: return decompose_drs_gf(trace, ref, pbar_override);
    case Algorithm::DrsFg: return decompose_drs_fg(trace, ref, pbar_override);
    case Algorithm::DysGf: return decompose_dys_gf(trace, ref, pbar_override);
    case Algorithm::DysFg: return decompose_dys_fg(trace, ref, pbar_override);
  }
  throw ArgumentError("unknown algorithm");
}

struct SignDiagnostics {
  bool pass = true;
  std::vector<std::pair<std::string, double>> offending;
};

/// Flags any I-term above `i_tol` and any S-term below `-s_tol`.
inline SignDiagnostics sign_report(const DecompositionReport& r, double i_tol, double s_tol) {
  SignDiagnostics d;
  auto check_i = [&](const char* name, double v) {
    if (v > i_tol) d.offending.emplace_back(name, v);
  };
  auto check_s = [&](const char* name, double v) {
    if (v < -s_tol) d.offending.emplace_back(name, v);
  };
  check_i("i_f", r.i_f);
  check_i("i_g", r.i_g);
  check_i("i_h", r.i_h);
  check_s("s_1", r.s_1);
  check_s("s_2", r.s_2);
  check_s("s_h", r.s_h);
  d.pass = d.offending.empty();
  return d;
}

inline SignDiagnostics sign_report(const DecompositionReport& r, double tol) { return sign_report(r, tol, tol); }

}  // namespace splitlab
