#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "splitlab/vector.hpp"

using namespace splitlab;

TEST(DenseVector, RejectsNonFinite) {
  EXPECT_THROW(DenseVector({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
  EXPECT_THROW(DenseVector({std::numeric_limits<double>::infinity()}), DomainError);
}

TEST(DenseVector, Arithmetic) {
  const DenseVector a{1.0, 2.0, 3.0}, b{4.0, -5.0, 6.0};
  EXPECT_EQ(a + b, (DenseVector{5.0, -3.0, 9.0}));
  EXPECT_EQ(a - b, (DenseVector{-3.0, 7.0, -3.0}));
  EXPECT_EQ(2.0 * a, (DenseVector{2.0, 4.0, 6.0}));
  EXPECT_EQ(a / 2.0, (DenseVector{0.5, 1.0, 1.5}));
  EXPECT_DOUBLE_EQ(dot(a, b), 12.0);
  EXPECT_DOUBLE_EQ(squared_norm(a), 14.0);
  EXPECT_DOUBLE_EQ(max_abs_diff(a, b), 7.0);
}

TEST(DenseVector, SizeMismatchThrows) {
  EXPECT_THROW(DenseVector({1.0}) + DenseVector({1.0, 2.0}), ArgumentError);
  EXPECT_THROW(dot(DenseVector({1.0}), DenseVector({1.0, 2.0})), ArgumentError);
}

TEST(DenseVector, UnitVector) {
  EXPECT_EQ(DenseVector::unit(3, 1), (DenseVector{0.0, 1.0, 0.0}));
  EXPECT_THROW(DenseVector::unit(3, 3), ArgumentError);
}

TEST(CompensatedSum, RecoversLostLowOrderBits) {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 10000; ++i) s += 1e-16;
  EXPECT_NEAR(s.value(), 1.0 + 1e-12, 1e-15);
}

TEST(ExtendedReal, InfinityAbsorbs) {
  const ExtendedReal inf = ExtendedReal::infinity();
  EXPECT_TRUE((inf + ExtendedReal(3.0)).is_infinite());
  EXPECT_TRUE(ExtendedReal(1.0) < inf);
  EXPECT_DOUBLE_EQ((ExtendedReal(1.0) + ExtendedReal(2.0)).value(), 3.0);
  EXPECT_THROW(ExtendedReal(-std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(ExtendedReal(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(inf.finite_or_throw("x"), DomainError);
}
