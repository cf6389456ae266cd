#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "splitlab/errors.hpp"

namespace splitlab {

/// Finite-dimensional real vector. Components are always finite.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0) : data_(n, fill) { check_finite(); }
  DenseVector(std::initializer_list<double> values) : data_(values) { check_finite(); }
  explicit DenseVector(std::vector<double> values) : data_(std::move(values)) { check_finite(); }

  /// Unit vector e_i in R^n.
  static DenseVector unit(std::size_t n, std::size_t index) {
    if (index >= n) throw ArgumentError("unit vector index out of range");
    DenseVector e(n);
    e.data_[index] = 1.0;
    return e;
  }

  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& raw() const noexcept { return data_; }

  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  DenseVector& operator+=(const DenseVector& o) {
    same_size(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseVector& operator-=(const DenseVector& o) {
    same_size(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseVector& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  DenseVector& operator/=(double s) {
    for (double& v : data_) v /= s;
    return *this;
  }

  /// Exact componentwise equality (no tolerance; +0 == -0).
  friend bool operator==(const DenseVector& a, const DenseVector& b) { return a.data_ == b.data_; }

  void same_size(const DenseVector& o) const {
    if (o.size() != size())
      throw ArgumentError("dimension mismatch: " + std::to_string(size()) + " vs " +
                          std::to_string(o.size()));
  }

  void check_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) throw DomainError("DenseVector component is not finite");
  }

 private:
  std::vector<double> data_;
};

inline DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
inline DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
inline DenseVector operator*(double s, DenseVector a) { return a *= s; }
inline DenseVector operator*(DenseVector a, double s) { return a *= s; }
inline DenseVector operator/(DenseVector a, double s) { return a /= s; }
inline DenseVector operator-(DenseVector a) { return a *= -1.0; }

inline double dot(const DenseVector& a, const DenseVector& b) {
  a.same_size(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(const DenseVector& a) { return dot(a, a); }
inline double norm(const DenseVector& a) { return std::sqrt(squared_norm(a)); }

inline double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  a.same_size(b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Componentwise compensated accumulator for sums of vectors.
class VectorAccumulator {
 public:
  explicit VectorAccumulator(std::size_t n) : parts_(n) {}
  void add(const DenseVector& v) {
    if (v.size() != parts_.size()) throw ArgumentError("dimension mismatch in accumulator");
    for (std::size_t i = 0; i < parts_.size(); ++i) parts_[i].add(v[i]);
  }
  DenseVector value() const {
    DenseVector out(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) out[i] = parts_[i].value();
    return out;
  }

 private:
  std::vector<CompensatedSum> parts_;
};

/// Real number or +infinity. NaN is rejected at construction.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw DomainError("NaN in extended-real arithmetic");
    if (v == -std::numeric_limits<double>::infinity())
      throw DomainError("-inf is not a valid extended-real value here");
  }
  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  bool is_finite() const noexcept { return std::isfinite(value_); }
  bool is_infinite() const noexcept { return !is_finite(); }
  double value() const noexcept { return value_; }

  /// Finite value or DomainError naming `what`.
  double finite_or_throw(const char* what) const {
    if (!is_finite()) throw DomainError(std::string(what) + " is +inf");
    return value_;
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend auto operator<=>(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ <=> b.value_; }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

}  // namespace splitlab
