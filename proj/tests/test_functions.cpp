#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace splitlab;
using namespace testing_support;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

bool is_radial(const ProxFunction& f) {
  const auto& v = f.variant();
  return std::holds_alternative<fn::ScaledEuclideanNorm>(v) || std::holds_alternative<fn::BallIndicator>(v) ||
         std::holds_alternative<fn::IndicatorOrigin>(v) || std::holds_alternative<fn::ScaledSquaredNorm>(v);
}

// Coordinate bracket for separable entries: the box itself, or a wide window.
std::pair<double, double> bracket(const ProxFunction& f, std::size_t i, double centre) {
  if (const auto* box = std::get_if<fn::BoxIndicator>(&f.variant()))
    return {box->lo.size() == 1 ? box->lo[0] : box->lo[i], box->hi.size() == 1 ? box->hi[0] : box->hi[i]};
  return {centre - 60.0, centre + 60.0};
}

// prox of alpha f by direct minimisation, independent of the closed forms.
DenseVector brute_prox(const ProxFunction& f, double alpha, const DenseVector& x, std::mt19937_64& rng) {
  const std::size_t n = x.size();
  if (is_radial(f)) {
    const double r = norm(x);
    if (r == 0.0) return DenseVector(n);
    const DenseVector dir = x / r;
    double hi = r;
    if (const auto* ball = std::get_if<fn::BallIndicator>(&f.variant())) hi = std::min(r, ball->eta);
    if (std::holds_alternative<fn::IndicatorOrigin>(f.variant())) hi = 0.0;
    const double t = golden_min(
        [&](double s) { return f.eval(s * dir).value() + (s - r) * (s - r) / (2.0 * alpha); }, 0.0, hi);
    return t * dir;
  }
  // separable: optimise one coordinate at a time around an in-domain base point
  DenseVector p = sample_domain(rng, f, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [a, b] = bracket(f, i, x[i]);
    auto phi = [&](double z) {
      DenseVector q = p;
      q[i] = z;
      return f.eval(q).value() + (z - x[i]) * (z - x[i]) / (2.0 * alpha);
    };
    p[i] = golden_min(phi, a, b);
  }
  return p;
}

// f^*(u) by direct maximisation; +inf shows up as a huge value. For separable f,
// f^*(u) = sum_i sup_z (z u_i - f(base with z at i) + f(base)) - f(base).
double brute_conj(const ProxFunction& f, const DenseVector& u, std::mt19937_64& rng) {
  const std::size_t n = u.size();
  const double R = 1e8;
  if (is_radial(f)) {
    const double r = norm(u);
    if (r == 0.0) return -f.eval(DenseVector(n)).value();
    const DenseVector dir = u / r;
    double hi = R;
    if (const auto* ball = std::get_if<fn::BallIndicator>(&f.variant())) hi = ball->eta;
    if (std::holds_alternative<fn::IndicatorOrigin>(f.variant())) hi = 0.0;
    const double t = golden_min([&](double s) { return f.eval(s * dir).value() - s * r; }, 0.0, hi);
    return t * r - f.eval(t * dir).value();
  }
  DenseVector base = sample_domain(rng, f, n);
  const double f_base = f.eval(base).value();
  double total = -f_base;
  for (std::size_t i = 0; i < n; ++i) {
    auto [a, b] = std::holds_alternative<fn::BoxIndicator>(f.variant()) ? bracket(f, i, 0.0)
                                                                        : std::pair{-R, R};
    auto phi = [&](double z) {
      DenseVector q = base;
      q[i] = z;
      return f.eval(q).value() - f_base - z * u[i];
    };
    total -= phi(golden_min(phi, a, b));
  }
  return total;
}

double objective(const ProxFunction& f, double alpha, const DenseVector& x, const DenseVector& p) {
  return f.eval(p).value() + squared_norm(p - x) / (2.0 * alpha);
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalogue values

TEST(Catalogue, Evaluations) {
  EXPECT_EQ(eval_catalogue_function("zero", {}, DenseVector{3.0, -4.0}).value(), 0.0);
  EXPECT_NEAR(eval_catalogue_function("scaled_euclidean_norm", {{"eta", {std::sqrt(2.0) / 3.0}}},
                                      DenseVector{1.0, 0.0})
                  .value(),
              0.47140452079103168, 1e-15);
  EXPECT_EQ(eval_catalogue_function("indicator_origin", {}, DenseVector{0.0, 0.0}).value(), 0.0);
  EXPECT_TRUE(eval_catalogue_function("indicator_origin", {}, DenseVector{0.0, 1.0}).is_infinite());
  EXPECT_DOUBLE_EQ(eval_catalogue_function("scaled_squared_norm", {{"c", {2.0}}}, DenseVector{1.0, 2.0}).value(),
                   5.0);
  EXPECT_DOUBLE_EQ(
      eval_catalogue_function("separable_quadratic", {{"a", {1.0, 2.0}}, {"b", {1.0, 0.0}}}, DenseVector{3.0, 1.0})
          .value(),
      3.0);
  EXPECT_DOUBLE_EQ(eval_catalogue_function("l1_norm", {{"eta", {0.5}}}, DenseVector{1.0, -3.0}).value(), 2.0);
  EXPECT_TRUE(eval_catalogue_function("box_indicator", {{"lo", {-1.0}}, {"hi", {1.0}}}, DenseVector{0.0, 2.0})
                  .is_infinite());
  EXPECT_TRUE(eval_catalogue_function("ball_indicator", {{"eta", {1.0}}}, DenseVector{1.0, 1.0}).is_infinite());
}

TEST(Catalogue, ConfigurationErrors) {
  EXPECT_THROW(eval_catalogue_function("cube", {}, DenseVector{1.0}), ConfigError);
  EXPECT_THROW(eval_catalogue_function("separable_quadratic", {{"a", {1.0, 2.0}}}, DenseVector{1.0, 2.0, 3.0}),
               ConfigError);
  EXPECT_THROW(make_prox_function("l1_norm", {{"eta", {-1.0}}}), ConfigError);
  EXPECT_THROW(make_prox_function("l1_norm", {{"eta", {1.0}}, {"c", {1.0}}}), ConfigError);
  EXPECT_THROW(make_prox_function("scaled_euclidean_norm", {}), ConfigError);
  EXPECT_THROW(make_prox_function("box_indicator", {{"lo", {1.0}}, {"hi", {0.0}}}), ConfigError);
  EXPECT_THROW(make_smooth_function("quartic"), ConfigError);
}

TEST(Catalogue, NamedProxValues) {
  const double s2 = std::sqrt(2.0);
  const ProxFunction f = fn::ScaledEuclideanNorm{s2 / 3.0};
  const DenseVector p = prox(f, 1.0, DenseVector{s2, 0.0});
  EXPECT_NEAR(p[0], 2.0 * s2 / 3.0, 1e-15);
  EXPECT_EQ(p[1], 0.0);
  EXPECT_EQ(prox(f, 2.0, DenseVector{0.3, 0.4}), DenseVector(2));
  // tie at norm(x) = alpha * eta returns zero
  EXPECT_EQ(prox(ProxFunction(fn::ScaledEuclideanNorm{0.5}), 2.0, DenseVector{0.6, 0.8}), DenseVector(2));
  EXPECT_EQ(prox(ProxFunction(fn::ScaledSquaredNorm{1.0}), 1.0, DenseVector{2.0, 0.0}), (DenseVector{1.0, 0.0}));
  EXPECT_EQ(prox(ProxFunction(fn::L1Norm{1.0}), 1.0, DenseVector{2.5, -0.5, -3.0}), (DenseVector{1.5, 0.0, -2.0}));
  EXPECT_EQ(prox(ProxFunction(fn::BoxIndicator{{-1.0}, {1.0}}), 3.0, DenseVector{2.0, -0.5}),
            (DenseVector{1.0, -0.5}));
  EXPECT_THROW(prox(f, 0.0, DenseVector{1.0, 0.0}), ArgumentError);
  EXPECT_THROW(prox(f, -1.0, DenseVector{1.0, 0.0}), ArgumentError);
}

TEST(Catalogue, SubgradAtProxValues) {
  const double s2 = std::sqrt(2.0);
  EXPECT_EQ(subgrad_at_prox(fn::Zero{}, 1.0, DenseVector{5.0, 5.0}), DenseVector(2));
  const DenseVector s = subgrad_at_prox(fn::ScaledEuclideanNorm{s2 / 3.0}, 1.0, DenseVector{s2, 0.0});
  EXPECT_NEAR(s[0], s2 / 3.0, 1e-15);
  EXPECT_EQ(subgrad_at_prox(fn::IndicatorOrigin{}, 2.0, DenseVector{4.0, -2.0}), (DenseVector{2.0, -1.0}));
}

TEST(Catalogue, ConjProxValues) {
  const double s2 = std::sqrt(2.0);
  EXPECT_LE(norm(conj_prox_via_moreau(fn::Zero{}, 0.7, DenseVector{1.0, -2.0})), 1e-15);
  EXPECT_EQ(conj_prox_via_moreau(fn::IndicatorOrigin{}, 0.7, DenseVector{1.0, -2.0}), (DenseVector{1.0, -2.0}));
  // g^* = eta ||.|| through the ball indicator
  const DenseVector u = conj_prox_via_moreau(fn::BallIndicator{s2 / 4.0}, 1.0, DenseVector{s2, 0.0});
  EXPECT_NEAR(u[0], s2 - s2 / 4.0, 1e-15);
  EXPECT_EQ(u[1], 0.0);
}

TEST(Catalogue, ConjSubgradSelections) {
  EXPECT_EQ(*conj_subgrad(fn::Zero{}, DenseVector{0.0, 0.0}), DenseVector(2));
  EXPECT_FALSE(conj_subgrad(fn::Zero{}, DenseVector{1.0, 0.0}).has_value());
  EXPECT_EQ(*conj_subgrad(fn::IndicatorOrigin{}, DenseVector{3.0, 1.0}), DenseVector(2));
  const auto p = conj_subgrad(fn::BallIndicator{2.0}, DenseVector{3.0, 4.0});
  ASSERT_TRUE(p);
  EXPECT_NEAR((*p)[0], 1.2, 1e-15);
  EXPECT_NEAR((*p)[1], 1.6, 1e-15);
  EXPECT_EQ(*conj_subgrad(fn::BallIndicator{2.0}, DenseVector{0.0, 0.0}), DenseVector(2));
  EXPECT_FALSE(conj_subgrad(fn::L1Norm{1.0}, DenseVector{1.5, 0.0}).has_value());
  EXPECT_FALSE(conj_subgrad(fn::ScaledEuclideanNorm{1.0}, DenseVector{1.0, 1.0}).has_value());
}

// ---------------------------------------------------------------------------
// Properties against brute-force oracles

class CatalogueProperty : public ::testing::TestWithParam<std::size_t> {};

TEST_P(CatalogueProperty, ProxMatchesDirectMinimisation) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(11 + n);
  for (int trial = 0; trial < 20; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      for (double alpha : {0.1, 1.0, 10.0}) {
        const DenseVector x = normal_vector(rng, n, 2.0);
        const DenseVector p = prox(f, alpha, x);
        const DenseVector q = brute_prox(f, alpha, x, rng);
        EXPECT_LE(objective(f, alpha, x, p), objective(f, alpha, x, q) + 1e-12)
            << f.name() << " alpha=" << alpha;
        EXPECT_LE(max_abs_diff(p, q), 1e-6) << f.name() << " alpha=" << alpha;
        // no nearby feasible point does better
        for (int k = 0; k < 10; ++k) {
          const DenseVector d = normal_vector(rng, n, std::pow(10.0, -uniform(rng, 1.0, 6.0)));
          const DenseVector y = p + d;
          if (!f.in_domain(y)) continue;
          EXPECT_LE(objective(f, alpha, x, p), objective(f, alpha, x, y) + 1e-12) << f.name();
        }
      }
    }
  }
}

TEST_P(CatalogueProperty, ConjugateMatchesDirectMaximisation) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(23 + n);
  for (int trial = 0; trial < 20; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      const DenseVector u = normal_vector(rng, n);
      const ExtendedReal c = f.conj_eval(u);
      const double b = brute_conj(f, u, rng);
      if (c.is_infinite()) {
        EXPECT_GT(b, 100.0) << f.name();
        EXPECT_FALSE(f.in_conj_domain(u)) << f.name();
      } else {
        EXPECT_NEAR(c.value(), b, 1e-7 * (1.0 + std::abs(b))) << f.name();
        EXPECT_TRUE(f.in_conj_domain(u)) << f.name();
      }
    }
  }
}

TEST_P(CatalogueProperty, MoreauIdentity) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(37 + n);
  for (int trial = 0; trial < 100; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      for (double alpha : {0.1, 1.0, 10.0}) {
        const DenseVector y = normal_vector(rng, n, 3.0);
        const DenseVector p = prox(f, alpha, y);
        const DenseVector w = conj_prox_via_moreau(f, alpha, y / alpha);
        EXPECT_LE(norm(p + alpha * w - y), 1e-12 * (1.0 + norm(y))) << f.name();
        // w in d f(p) certified by Fenchel-Young equality with the closed-form conjugate
        const double fp = f.eval(p).value();
        const ExtendedReal cw = f.conj_eval(w);
        ASSERT_TRUE(cw.is_finite()) << f.name();
        EXPECT_LE(std::abs(fp + cw.value() - dot(p, w)), 1e-12 * (1.0 + std::abs(fp) + std::abs(cw.value())))
            << f.name();
      }
    }
  }
}

TEST_P(CatalogueProperty, FenchelIdentityAtSelectedSubgradient) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(41 + n);
  for (int trial = 0; trial < 100; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      // half of the samples land on the conjugate domain boundary or in its interior
      DenseVector u = normal_vector(rng, n);
      if (trial % 2 == 0) u = conj_prox_via_moreau(f, 1.0, u);
      const auto p = f.conj_subgrad(u);
      if (!p) {
        EXPECT_FALSE(f.in_conj_domain(u));
        continue;
      }
      const double c = f.conj_eval(u).value();
      EXPECT_LE(std::abs(c - dot(u, *p) + f.eval(*p).value()), 1e-12 * (1.0 + std::abs(c))) << f.name();
    }
  }
}

TEST_P(CatalogueProperty, ProxSubgradientInequality) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(53 + n);
  for (int trial = 0; trial < 50; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      const double alpha = uniform(rng, 0.1, 10.0);
      const DenseVector x = normal_vector(rng, n, 2.0);
      const DenseVector p = prox(f, alpha, x);
      const DenseVector s = subgrad_at_prox(f, alpha, x);
      for (int k = 0; k < 5; ++k) {
        const DenseVector y = sample_domain(rng, f, n);
        const double fy = f.eval(y).value();
        EXPECT_LE(f.eval(p).value() - fy + dot(s, y - p), 1e-12 * (1.0 + std::abs(fy) + norm(s) * norm(y - p)))
            << f.name();
      }
    }
  }
}

TEST_P(CatalogueProperty, AnalyticSubgradientSelectionIsValid) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(59 + n);
  for (int trial = 0; trial < 50; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      const DenseVector x = sample_domain(rng, f, n);
      const DenseVector s = f.subgrad(x);
      for (int k = 0; k < 5; ++k) {
        const DenseVector y = sample_domain(rng, f, n);
        const double fy = f.eval(y).value();
        EXPECT_LE(f.eval(x).value() - fy + dot(s, y - x), 1e-12 * (1.0 + std::abs(fy) + norm(s) * norm(y - x)))
            << f.name();
      }
    }
  }
}

TEST_P(CatalogueProperty, ProxIsFirmlyNonexpansive) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(61 + n);
  for (int trial = 0; trial < 100; ++trial) {
    for (const ProxFunction& f : random_catalogue(rng, n)) {
      const double alpha = uniform(rng, 0.1, 10.0);
      const DenseVector x = normal_vector(rng, n, 2.0), y = normal_vector(rng, n, 2.0);
      const DenseVector d = prox(f, alpha, x) - prox(f, alpha, y);
      EXPECT_LE(squared_norm(d), dot(d, x - y) + 1e-12) << f.name();
    }
  }
}

TEST_P(CatalogueProperty, SmoothInequalityAndLipschitzGradient) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(67 + n);
  for (int trial = 0; trial < 100; ++trial) {
    for (const SmoothFunction& h : random_smooth_catalogue(rng, n)) {
      const DenseVector x = normal_vector(rng, n, 2.0), y = normal_vector(rng, n, 2.0);
      const DenseVector gx = h.grad(x), gy = h.grad(y);
      const double L = h.lipschitz();
      EXPECT_LE(norm(gx - gy), L * norm(x - y) + 1e-12) << h.name();
      double lhs = h.eval(x) - h.eval(y) + dot(gx, y - x);
      if (L > 0.0) lhs += squared_norm(gx - gy) / (2.0 * L);
      EXPECT_LE(lhs, 1e-12 * (1.0 + std::abs(h.eval(x)) + std::abs(h.eval(y)))) << h.name();
    }
  }
}

TEST_P(CatalogueProperty, SmoothGradientMatchesFiniteDifferences) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(71 + n);
  for (int trial = 0; trial < 20; ++trial) {
    for (const SmoothFunction& h : random_smooth_catalogue(rng, n)) {
      const DenseVector x = normal_vector(rng, n, 2.0);
      const DenseVector g = h.grad(x);
      for (std::size_t i = 0; i < n; ++i) {
        const double step = 1e-6;
        DenseVector xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        EXPECT_NEAR((h.eval(xp) - h.eval(xm)) / (2.0 * step), g[i], 1e-5) << h.name();
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, CatalogueProperty, ::testing::Values(1, 3, 10));

TEST(SmoothFunction, ZeroHasZeroGradientAndLipschitz) {
  const SmoothFunction h;
  EXPECT_TRUE(h.is_zero());
  EXPECT_EQ(h.lipschitz(), 0.0);
  EXPECT_EQ(h.grad(DenseVector{1.0, 2.0}), DenseVector(2));
}

TEST(ExtendedRealValues, IndicatorsReturnInfinityOutsideTheSet) {
  EXPECT_EQ(fn::BallIndicator{1.0}.eval(DenseVector{2.0}).value(), kInf);
  EXPECT_EQ((fn::BoxIndicator{{0.0}, {1.0}}.eval(DenseVector{-0.5}).value()), kInf);
}
