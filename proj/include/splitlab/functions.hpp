#pragma once

// Convex-function oracles: a catalogue of closed, convex, proper functions with
// closed-form prox, conjugate and subgradient selections, plus a small catalogue
// of convex L-smooth functions.
//
// Conventions used throughout:
//   prox(alpha, x)        = argmin_y  fn(y) + ||y - x||^2 / (2 alpha)
//   subgrad_at_prox       = (x - prox(alpha, x)) / alpha  in  d fn(prox(alpha, x))
//   conj_prox_via_moreau  = prox of (1/alpha) fn^* at y,  y - prox(alpha, alpha y) / alpha

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "splitlab/errors.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

/// Named real parameters; scalars are stored as length-1 lists.
using ParamMap = std::map<std::string, std::vector<double>, std::less<>>;

/// Slack for set membership of indicator-type functions and conjugate domains.
inline constexpr double kFeasibilityTol = 1e-9;

namespace detail {

inline double scalar_param(const ParamMap& p, std::string_view key, std::string_view fn) {
  auto it = p.find(key);
  if (it == p.end())
    throw ConfigError(std::string(fn) + ": missing parameter '" + std::string(key) + "'");
  if (it->second.size() != 1)
    throw ConfigError(std::string(fn) + ": parameter '" + std::string(key) + "' must be a scalar");
  return it->second.front();
}

inline std::vector<double> vector_param(const ParamMap& p, std::string_view key, std::string_view fn) {
  auto it = p.find(key);
  if (it == p.end())
    throw ConfigError(std::string(fn) + ": missing parameter '" + std::string(key) + "'");
  if (it->second.empty())
    throw ConfigError(std::string(fn) + ": parameter '" + std::string(key) + "' is empty");
  return it->second;
}

inline void reject_unknown(const ParamMap& p, std::initializer_list<std::string_view> allowed,
                           std::string_view fn) {
  for (const auto& [key, _] : p)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(std::string(fn) + ": unknown parameter '" + key + "'");
}

/// Broadcast a length-1 or length-n parameter list to component i.
inline double at(const std::vector<double>& v, std::size_t i) { return v.size() == 1 ? v[0] : v[i]; }

inline void check_broadcast(const std::vector<double>& v, std::size_t n, std::string_view what) {
  if (v.size() != 1 && v.size() != n)
    throw ConfigError(std::string(what) + ": parameter length " + std::to_string(v.size()) +
                      " does not match dimension " + std::to_string(n));
}

inline bool near_zero(const DenseVector& u) {
  for (double c : u)
    if (std::abs(c) > kFeasibilityTol) return false;
  return true;
}

inline double sign_or_zero(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

inline void require_nonnegative(double v, std::string_view what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite and >= 0");
}

}  // namespace detail

/// Oracle surface every catalogue entry provides.
template <typename F>
concept ProxOracle = requires(const F& f, const DenseVector& x, double alpha, std::size_t n) {
  { F::kName } -> std::convertible_to<std::string_view>;
  { f.eval(x) } -> std::same_as<ExtendedReal>;
  { f.prox(alpha, x) } -> std::same_as<DenseVector>;
  { f.conj_eval(x) } -> std::same_as<ExtendedReal>;
  { f.conj_subgrad(x) } -> std::same_as<std::optional<DenseVector>>;
  { f.subgrad(x) } -> std::same_as<DenseVector>;
  { f.in_domain(x) } -> std::same_as<bool>;
  { f.in_conj_domain(x) } -> std::same_as<bool>;
  { f.params() } -> std::same_as<ParamMap>;
  f.check_dimension(n);
};

namespace fn {

/// f = 0; f^* = indicator of {0}.
struct Zero {
  static constexpr std::string_view kName = "zero";
  ExtendedReal eval(const DenseVector&) const { return 0.0; }
  DenseVector prox(double, const DenseVector& x) const { return x; }
  ExtendedReal conj_eval(const DenseVector& u) const {
    return in_conj_domain(u) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    if (!in_conj_domain(u)) return std::nullopt;
    return DenseVector(u.size());
  }
  DenseVector subgrad(const DenseVector& x) const { return DenseVector(x.size()); }
  bool in_domain(const DenseVector&) const { return true; }
  bool in_conj_domain(const DenseVector& u) const { return detail::near_zero(u); }
  ParamMap params() const { return {}; }
  void check_dimension(std::size_t) const {}
};

/// f = eta ||x||; f^* = indicator of the eta-ball.
struct ScaledEuclideanNorm {
  static constexpr std::string_view kName = "scaled_euclidean_norm";
  double eta = 1.0;

  ExtendedReal eval(const DenseVector& x) const { return eta * norm(x); }
  DenseVector prox(double alpha, const DenseVector& x) const {
    // Block soft-threshold; the tie ||x|| == alpha*eta maps to 0.
    const double t = alpha * eta;
    const double nx = norm(x);
    if (nx <= t) return DenseVector(x.size());
    return x * ((nx - t) / nx);
  }
  ExtendedReal conj_eval(const DenseVector& u) const {
    return in_conj_domain(u) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    if (!in_conj_domain(u)) return std::nullopt;
    return DenseVector(u.size());
  }
  DenseVector subgrad(const DenseVector& x) const {
    const double nx = norm(x);
    if (nx == 0.0) return DenseVector(x.size());
    return x * (eta / nx);
  }
  bool in_domain(const DenseVector&) const { return true; }
  bool in_conj_domain(const DenseVector& u) const { return norm(u) <= eta + kFeasibilityTol * (1.0 + eta); }
  ParamMap params() const { return {{"eta", {eta}}}; }
  void check_dimension(std::size_t) const {}
};

/// f = indicator of {0}; f^* = 0.
struct IndicatorOrigin {
  static constexpr std::string_view kName = "indicator_origin";
  ExtendedReal eval(const DenseVector& x) const {
    return in_domain(x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  DenseVector prox(double, const DenseVector& x) const { return DenseVector(x.size()); }
  ExtendedReal conj_eval(const DenseVector&) const { return 0.0; }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const { return DenseVector(u.size()); }
  DenseVector subgrad(const DenseVector& x) const { return DenseVector(x.size()); }
  bool in_domain(const DenseVector& x) const { return detail::near_zero(x); }
  bool in_conj_domain(const DenseVector&) const { return true; }
  ParamMap params() const { return {}; }
  void check_dimension(std::size_t) const {}
};

/// f = (c/2) ||x||^2; f^* = ||u||^2 / (2c), or the indicator of {0} when c = 0.
struct ScaledSquaredNorm {
  static constexpr std::string_view kName = "scaled_squared_norm";
  double c = 1.0;

  ExtendedReal eval(const DenseVector& x) const { return 0.5 * c * squared_norm(x); }
  DenseVector prox(double alpha, const DenseVector& x) const { return x / (1.0 + alpha * c); }
  ExtendedReal conj_eval(const DenseVector& u) const {
    if (c > 0.0) return squared_norm(u) / (2.0 * c);
    return in_conj_domain(u) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    if (c > 0.0) return u / c;
    if (!in_conj_domain(u)) return std::nullopt;
    return DenseVector(u.size());
  }
  DenseVector subgrad(const DenseVector& x) const { return c * x; }
  bool in_domain(const DenseVector&) const { return true; }
  bool in_conj_domain(const DenseVector& u) const { return c > 0.0 || detail::near_zero(u); }
  ParamMap params() const { return {{"c", {c}}}; }
  void check_dimension(std::size_t) const {}
};

/// f = (1/2) sum_i a_i (x_i - b_i)^2 with a_i >= 0.
struct SeparableQuadratic {
  static constexpr std::string_view kName = "separable_quadratic";
  std::vector<double> a{1.0};
  std::vector<double> b{0.0};

  ExtendedReal eval(const DenseVector& x) const {
    check_dimension(x.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - detail::at(b, i);
      s += 0.5 * detail::at(a, i) * d * d;
    }
    return s.value();
  }
  DenseVector prox(double alpha, const DenseVector& x) const {
    check_dimension(x.size());
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ai = detail::at(a, i);
      out[i] = (x[i] + alpha * ai * detail::at(b, i)) / (1.0 + alpha * ai);
    }
    return out;
  }
  ExtendedReal conj_eval(const DenseVector& u) const {
    check_dimension(u.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double ai = detail::at(a, i);
      if (ai > 0.0) {
        s += u[i] * u[i] / (2.0 * ai) + u[i] * detail::at(b, i);
      } else if (std::abs(u[i]) > kFeasibilityTol) {
        return ExtendedReal::infinity();
      }
    }
    return s.value();
  }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    if (!in_conj_domain(u)) return std::nullopt;
    DenseVector p(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double ai = detail::at(a, i);
      p[i] = ai > 0.0 ? u[i] / ai + detail::at(b, i) : 0.0;
    }
    return p;
  }
  DenseVector subgrad(const DenseVector& x) const {
    check_dimension(x.size());
    DenseVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = detail::at(a, i) * (x[i] - detail::at(b, i));
    return g;
  }
  bool in_domain(const DenseVector&) const { return true; }
  bool in_conj_domain(const DenseVector& u) const {
    check_dimension(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      if (detail::at(a, i) == 0.0 && std::abs(u[i]) > kFeasibilityTol) return false;
    return true;
  }
  ParamMap params() const { return {{"a", a}, {"b", b}}; }
  void check_dimension(std::size_t n) const {
    detail::check_broadcast(a, n, kName);
    detail::check_broadcast(b, n, kName);
  }
};

/// f = eta ||x||_1; f^* = indicator of the eta-box in the max-norm.
struct L1Norm {
  static constexpr std::string_view kName = "l1_norm";
  double eta = 1.0;

  ExtendedReal eval(const DenseVector& x) const {
    CompensatedSum s;
    for (double c : x) s += std::abs(c);
    return eta * s.value();
  }
  DenseVector prox(double alpha, const DenseVector& x) const {
    const double t = alpha * eta;
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = detail::sign_or_zero(x[i]) * std::max(std::abs(x[i]) - t, 0.0);
    return out;
  }
  ExtendedReal conj_eval(const DenseVector& u) const {
    return in_conj_domain(u) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    if (!in_conj_domain(u)) return std::nullopt;
    return DenseVector(u.size());
  }
  DenseVector subgrad(const DenseVector& x) const {
    DenseVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = eta * detail::sign_or_zero(x[i]);
    return g;
  }
  bool in_domain(const DenseVector&) const { return true; }
  bool in_conj_domain(const DenseVector& u) const {
    for (double c : u)
      if (std::abs(c) > eta + kFeasibilityTol * (1.0 + eta)) return false;
    return true;
  }
  ParamMap params() const { return {{"eta", {eta}}}; }
  void check_dimension(std::size_t) const {}
};

/// f = indicator of [lo, hi] (componentwise); f^* = support function of the box.
struct BoxIndicator {
  static constexpr std::string_view kName = "box_indicator";
  std::vector<double> lo{-1.0};
  std::vector<double> hi{1.0};

  ExtendedReal eval(const DenseVector& x) const {
    return in_domain(x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  DenseVector prox(double, const DenseVector& x) const {
    check_dimension(x.size());
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], detail::at(lo, i), detail::at(hi, i));
    return out;
  }
  ExtendedReal conj_eval(const DenseVector& u) const {
    check_dimension(u.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < u.size(); ++i)
      s += std::max(detail::at(lo, i) * u[i], detail::at(hi, i) * u[i]);
    return s.value();
  }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    check_dimension(u.size());
    DenseVector p(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double l = detail::at(lo, i), h = detail::at(hi, i);
      p[i] = u[i] > 0.0 ? h : (u[i] < 0.0 ? l : std::clamp(0.0, l, h));
    }
    return p;
  }
  DenseVector subgrad(const DenseVector& x) const { return DenseVector(x.size()); }
  bool in_domain(const DenseVector& x) const {
    check_dimension(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double l = detail::at(lo, i), h = detail::at(hi, i);
      if (x[i] < l - kFeasibilityTol * (1.0 + std::abs(l)) || x[i] > h + kFeasibilityTol * (1.0 + std::abs(h)))
        return false;
    }
    return true;
  }
  bool in_conj_domain(const DenseVector&) const { return true; }
  ParamMap params() const { return {{"lo", lo}, {"hi", hi}}; }
  void check_dimension(std::size_t n) const {
    detail::check_broadcast(lo, n, kName);
    detail::check_broadcast(hi, n, kName);
  }
};

/// f = indicator of the eta-ball; f^* = eta ||u||.
struct BallIndicator {
  static constexpr std::string_view kName = "ball_indicator";
  double eta = 1.0;

  ExtendedReal eval(const DenseVector& x) const {
    return in_domain(x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  DenseVector prox(double, const DenseVector& x) const {
    const double nx = norm(x);
    if (nx <= eta) return x;
    return x * (eta / nx);
  }
  ExtendedReal conj_eval(const DenseVector& u) const { return eta * norm(u); }
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    const double nu = norm(u);
    if (nu == 0.0) return DenseVector(u.size());
    return u * (eta / nu);
  }
  DenseVector subgrad(const DenseVector& x) const { return DenseVector(x.size()); }
  bool in_domain(const DenseVector& x) const { return norm(x) <= eta + kFeasibilityTol * (1.0 + eta); }
  bool in_conj_domain(const DenseVector&) const { return true; }
  ParamMap params() const { return {{"eta", {eta}}}; }
  void check_dimension(std::size_t) const {}
};

static_assert(ProxOracle<Zero> && ProxOracle<ScaledEuclideanNorm> && ProxOracle<IndicatorOrigin> &&
              ProxOracle<ScaledSquaredNorm> && ProxOracle<SeparableQuadratic> && ProxOracle<L1Norm> &&
              ProxOracle<BoxIndicator> && ProxOracle<BallIndicator>);

}  // namespace fn

/// A closed convex proper function from the catalogue. Immutable value type.
class ProxFunction {
 public:
  using Variant = std::variant<fn::Zero, fn::ScaledEuclideanNorm, fn::IndicatorOrigin, fn::ScaledSquaredNorm,
                               fn::SeparableQuadratic, fn::L1Norm, fn::BoxIndicator, fn::BallIndicator>;

  ProxFunction() = default;
  template <ProxOracle F>
  ProxFunction(F f) : impl_(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  std::string_view name() const {
    return std::visit([](const auto& f) -> std::string_view { return std::decay_t<decltype(f)>::kName; }, impl_);
  }
  ParamMap params() const { return std::visit([](const auto& f) { return f.params(); }, impl_); }

  ExtendedReal eval(const DenseVector& x) const {
    return std::visit([&](const auto& f) { return f.eval(x); }, impl_);
  }
  DenseVector prox(double alpha, const DenseVector& x) const {
    if (!(alpha > 0.0)) throw ArgumentError("prox step alpha must be > 0");
    return std::visit([&](const auto& f) { return f.prox(alpha, x); }, impl_);
  }
  ExtendedReal conj_eval(const DenseVector& u) const {
    return std::visit([&](const auto& f) { return f.conj_eval(u); }, impl_);
  }
  /// One element of d fn^*(u), or nullopt when u is outside dom fn^*.
  std::optional<DenseVector> conj_subgrad(const DenseVector& u) const {
    return std::visit([&](const auto& f) { return f.conj_subgrad(u); }, impl_);
  }
  /// Analytic subgradient selection at x in dom fn.
  DenseVector subgrad(const DenseVector& x) const {
    return std::visit([&](const auto& f) { return f.subgrad(x); }, impl_);
  }
  bool in_domain(const DenseVector& x) const {
    return std::visit([&](const auto& f) { return f.in_domain(x); }, impl_);
  }
  bool in_conj_domain(const DenseVector& u) const {
    return std::visit([&](const auto& f) { return f.in_conj_domain(u); }, impl_);
  }
  void check_dimension(std::size_t n) const {
    std::visit([&](const auto& f) { f.check_dimension(n); }, impl_);
  }

  const Variant& variant() const noexcept { return impl_; }

 private:
  Variant impl_;
};

inline DenseVector prox(const ProxFunction& fn, double alpha, const DenseVector& x) { return fn.prox(alpha, x); }

inline DenseVector subgrad_at_prox(const ProxFunction& fn, double alpha, const DenseVector& x) {
  return (x - fn.prox(alpha, x)) / alpha;
}

/// prox_{(1/alpha) fn^*}(y) through the Moreau identity.
inline DenseVector conj_prox_via_moreau(const ProxFunction& fn, double alpha, const DenseVector& y) {
  return y - fn.prox(alpha, alpha * y) / alpha;
}

inline std::optional<DenseVector> conj_subgrad(const ProxFunction& fn, const DenseVector& u) {
  return fn.conj_subgrad(u);
}

inline ProxFunction make_prox_function(std::string_view name, const ParamMap& p = {}) {
  using detail::reject_unknown;
  if (name == fn::Zero::kName) {
    reject_unknown(p, {}, name);
    return fn::Zero{};
  }
  if (name == fn::ScaledEuclideanNorm::kName) {
    reject_unknown(p, {"eta"}, name);
    const double eta = detail::scalar_param(p, "eta", name);
    detail::require_nonnegative(eta, "scaled_euclidean_norm.eta");
    return fn::ScaledEuclideanNorm{eta};
  }
  if (name == fn::IndicatorOrigin::kName) {
    reject_unknown(p, {}, name);
    return fn::IndicatorOrigin{};
  }
  if (name == fn::ScaledSquaredNorm::kName) {
    reject_unknown(p, {"c"}, name);
    const double c = detail::scalar_param(p, "c", name);
    detail::require_nonnegative(c, "scaled_squared_norm.c");
    return fn::ScaledSquaredNorm{c};
  }
  if (name == fn::SeparableQuadratic::kName) {
    reject_unknown(p, {"a", "b"}, name);
    auto a = detail::vector_param(p, "a", name);
    for (double ai : a) detail::require_nonnegative(ai, "separable_quadratic.a");
    std::vector<double> b = p.contains("b") ? detail::vector_param(p, "b", name) : std::vector<double>{0.0};
    for (double bi : b)
      if (!std::isfinite(bi)) throw ConfigError("separable_quadratic.b must be finite");
    return fn::SeparableQuadratic{std::move(a), std::move(b)};
  }
  if (name == fn::L1Norm::kName) {
    reject_unknown(p, {"eta"}, name);
    const double eta = detail::scalar_param(p, "eta", name);
    detail::require_nonnegative(eta, "l1_norm.eta");
    return fn::L1Norm{eta};
  }
  if (name == fn::BoxIndicator::kName) {
    reject_unknown(p, {"lo", "hi"}, name);
    auto lo = detail::vector_param(p, "lo", name);
    auto hi = detail::vector_param(p, "hi", name);
    if (lo.size() != hi.size() && lo.size() != 1 && hi.size() != 1)
      throw ConfigError("box_indicator: lo and hi lengths differ");
    const std::size_t n = std::max(lo.size(), hi.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double l = detail::at(lo, i), h = detail::at(hi, i);
      if (!std::isfinite(l) || !std::isfinite(h) || l > h)
        throw ConfigError("box_indicator: need finite lo <= hi");
    }
    return fn::BoxIndicator{std::move(lo), std::move(hi)};
  }
  if (name == fn::BallIndicator::kName) {
    reject_unknown(p, {"eta"}, name);
    const double eta = detail::scalar_param(p, "eta", name);
    detail::require_nonnegative(eta, "ball_indicator.eta");
    return fn::BallIndicator{eta};
  }
  throw ConfigError("unknown function name '" + std::string(name) + "'");
}

inline ExtendedReal eval_catalogue_function(std::string_view name, const ParamMap& params, const DenseVector& x) {
  auto f = make_prox_function(name, params);
  f.check_dimension(x.size());
  return f.eval(x);
}

// ---------------------------------------------------------------------------
// Smooth functions

namespace smooth {

struct Zero {
  static constexpr std::string_view kName = "zero";
  double eval(const DenseVector&) const { return 0.0; }
  DenseVector grad(const DenseVector& x) const { return DenseVector(x.size()); }
  double lipschitz() const { return 0.0; }
  ParamMap params() const { return {}; }
  void check_dimension(std::size_t) const {}
};

/// h = (c/2) ||x||^2, L = c.
struct ScaledSquaredNorm {
  static constexpr std::string_view kName = "scaled_squared_norm";
  double c = 1.0;
  double eval(const DenseVector& x) const { return 0.5 * c * squared_norm(x); }
  DenseVector grad(const DenseVector& x) const { return c * x; }
  double lipschitz() const { return c; }
  ParamMap params() const { return {{"c", {c}}}; }
  void check_dimension(std::size_t) const {}
};

/// h = (1/2) sum_i a_i (x_i - b_i)^2, L = max a_i.
struct SeparableQuadratic {
  static constexpr std::string_view kName = "separable_quadratic";
  std::vector<double> a{1.0};
  std::vector<double> b{0.0};
  double eval(const DenseVector& x) const {
    check_dimension(x.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - detail::at(b, i);
      s += 0.5 * detail::at(a, i) * d * d;
    }
    return s.value();
  }
  DenseVector grad(const DenseVector& x) const {
    check_dimension(x.size());
    DenseVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = detail::at(a, i) * (x[i] - detail::at(b, i));
    return g;
  }
  double lipschitz() const { return *std::max_element(a.begin(), a.end()); }
  ParamMap params() const { return {{"a", a}, {"b", b}}; }
  void check_dimension(std::size_t n) const {
    detail::check_broadcast(a, n, kName);
    detail::check_broadcast(b, n, kName);
  }
};

/// h = sum_i a_i huber(x_i - b_i) with unit threshold, L = max a_i.
struct Huber {
  static constexpr std::string_view kName = "huber";
  std::vector<double> a{1.0};
  std::vector<double> b{0.0};
  double eval(const DenseVector& x) const {
    check_dimension(x.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = std::abs(x[i] - detail::at(b, i));
      s += detail::at(a, i) * (t <= 1.0 ? 0.5 * t * t : t - 0.5);
    }
    return s.value();
  }
  DenseVector grad(const DenseVector& x) const {
    check_dimension(x.size());
    DenseVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      g[i] = detail::at(a, i) * std::clamp(x[i] - detail::at(b, i), -1.0, 1.0);
    return g;
  }
  double lipschitz() const { return *std::max_element(a.begin(), a.end()); }
  ParamMap params() const { return {{"a", a}, {"b", b}}; }
  void check_dimension(std::size_t n) const {
    detail::check_broadcast(a, n, kName);
    detail::check_broadcast(b, n, kName);
  }
};

}  // namespace smooth

/// A convex L-smooth function. Immutable value type.
class SmoothFunction {
 public:
  using Variant = std::variant<smooth::Zero, smooth::ScaledSquaredNorm, smooth::SeparableQuadratic, smooth::Huber>;

  SmoothFunction() = default;
  template <typename F>
    requires std::constructible_from<Variant, F>
  SmoothFunction(F f) : impl_(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  std::string_view name() const {
    return std::visit([](const auto& f) -> std::string_view { return std::decay_t<decltype(f)>::kName; }, impl_);
  }
  ParamMap params() const { return std::visit([](const auto& f) { return f.params(); }, impl_); }
  double eval(const DenseVector& x) const { return std::visit([&](const auto& f) { return f.eval(x); }, impl_); }
  DenseVector grad(const DenseVector& x) const {
    return std::visit([&](const auto& f) { return f.grad(x); }, impl_);
  }
  double lipschitz() const { return std::visit([](const auto& f) { return f.lipschitz(); }, impl_); }
  bool is_zero() const { return std::holds_alternative<smooth::Zero>(impl_); }
  void check_dimension(std::size_t n) const {
    std::visit([&](const auto& f) { f.check_dimension(n); }, impl_);
  }

 private:
  Variant impl_;
};

inline SmoothFunction make_smooth_function(std::string_view name, const ParamMap& p = {}) {
  using detail::reject_unknown;
  if (name == smooth::Zero::kName) {
    reject_unknown(p, {}, name);
    return smooth::Zero{};
  }
  if (name == smooth::ScaledSquaredNorm::kName) {
    reject_unknown(p, {"c"}, name);
    const double c = detail::scalar_param(p, "c", name);
    detail::require_nonnegative(c, "scaled_squared_norm.c");
    return smooth::ScaledSquaredNorm{c};
  }
  if (name == smooth::SeparableQuadratic::kName || name == smooth::Huber::kName) {
    reject_unknown(p, {"a", "b"}, name);
    auto a = detail::vector_param(p, "a", name);
    for (double ai : a) detail::require_nonnegative(ai, std::string(name) + ".a");
    std::vector<double> b = p.contains("b") ? detail::vector_param(p, "b", name) : std::vector<double>{0.0};
    for (double bi : b)
      if (!std::isfinite(bi)) throw ConfigError(std::string(name) + ".b must be finite");
    if (name == smooth::Huber::kName) return smooth::Huber{std::move(a), std::move(b)};
    return smooth::SeparableQuadratic{std::move(a), std::move(b)};
  }
  throw ConfigError("unknown smooth function name '" + std::string(name) + "'");
}

}  // namespace splitlab
