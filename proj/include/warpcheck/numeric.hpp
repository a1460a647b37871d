#pragma once

// Small dense numeric substrate: vectors, matrices, Gram-Schmidt, a cyclic
// Jacobi eigensolver and central-difference stencils. Everything here is
// sized for frames of dimension <= ~30.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "warpcheck/error.hpp"

namespace warpcheck {

struct Tolerance {
  double algebraic = 1e-10;
  double finite_difference = 1e-4;
  double equality_gap = 1e-6;

  /// Throws invalid_parameter unless every field is strictly positive.
  void validate() const;
};

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double value = 0.0) : v_(n, value) {}
  Vec(std::initializer_list<double> xs) : v_(xs) {}
  explicit Vec(std::vector<double> xs) : v_(std::move(xs)) {}

  static Vec unit(std::size_t n, std::size_t i) {
    Vec e(n);
    e[i] = 1.0;
    return e;
  }

  std::size_t size() const noexcept { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double* data() noexcept { return v_.data(); }
  const double* data() const noexcept { return v_.data(); }
  std::span<const double> span() const noexcept { return v_; }
  std::span<double> span() noexcept { return v_; }
  operator std::span<const double>() const noexcept { return v_; }
  const std::vector<double>& values() const noexcept { return v_; }

  auto begin() noexcept { return v_.begin(); }
  auto end() noexcept { return v_.end(); }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

  bool operator==(const Vec&) const = default;

 private:
  std::vector<double> v_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator-(Vec a);
Vec operator*(double s, Vec a);
Vec operator*(Vec a, double s);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double max_abs(const Vec& a);
bool all_finite(const Vec& a);

/// Row-major dense matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, value) {}
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat diagonal(const Vec& d);
  static Mat from_columns(std::span<const Vec> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_col(std::size_t j, const Vec& v);
  Mat transposed() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);
Mat operator*(Mat a, double s);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);

double max_abs(const Mat& m);
bool all_finite(const Mat& m);
double trace(const Mat& m);
bool is_symmetric(const Mat& m, double tol);

/// Solves a symmetric positive definite system via Cholesky; throws
/// degenerate_metric when a pivot is not positive.
Mat cholesky(const Mat& spd);
Mat inverse_spd(const Mat& spd);

using InnerProduct = std::function<double(const Vec&, const Vec&)>;

InnerProduct euclidean_inner();
InnerProduct metric_inner(Mat g);

/// Modified Gram-Schmidt in the given order. Pivot norms below `tol` raise a
/// degenerate_input error.
std::vector<Vec> gram_schmidt(std::span<const Vec> vectors, const InnerProduct& inner,
                              double tol = 1e-10);

/// Orthonormalizes `seed` (which must be independent) and then extends it with
/// the candidates in order, silently skipping those dependent on what is
/// already collected, until `target` vectors are found.
std::vector<Vec> complete_orthonormal(std::span<const Vec> seed, std::span<const Vec> candidates,
                                      std::size_t target, const InnerProduct& inner,
                                      double tol = 1e-8);

struct SymEigen {
  Vec values;   // ascending
  Mat vectors;  // column j pairs with values[j]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-13 (relative to max(1, |m|_F)).
SymEigen sym_eigen(const Mat& m, double symmetry_tol = 1e-10);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Absolute step scaled by max(1, |x_i|).
inline double fd_step(double base, double xi) { return base * std::max(1.0, std::abs(xi)); }

inline bool is_finite_value(double v) { return std::isfinite(v); }
inline bool is_finite_value(const Vec& v) { return all_finite(v); }
inline bool is_finite_value(const Mat& m) { return all_finite(m); }

/// Central difference of any vector-space valued function along coordinate i.
template <class F>
auto central_diff_of(F&& f, std::span<const double> x, std::size_t i, double step) {
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> xm(x.begin(), x.end());
  const double h = fd_step(step, x[i]);
  xp[i] += h;
  xm[i] -= h;
  auto fp = f(std::span<const double>(xp));
  auto fm = f(std::span<const double>(xm));
  if (!is_finite_value(fp) || !is_finite_value(fm))
    throw Error(ErrorKind::numerical_domain, "non-finite evaluation in central difference");
  return (fp - fm) * (1.0 / (2.0 * h));
}

/// Second derivative along (i, j): 3-point stencil on the diagonal, 4-point
/// cross stencil otherwise.
template <class F>
auto second_diff_of(F&& f, std::span<const double> x, std::size_t i, std::size_t j,
                    double step) {
  std::vector<double> y(x.begin(), x.end());
  auto eval = [&](double di, double dj) {
    std::copy(x.begin(), x.end(), y.begin());
    y[i] += di;
    y[j] += dj;
    auto v = f(std::span<const double>(y));
    if (!is_finite_value(v))
      throw Error(ErrorKind::numerical_domain, "non-finite evaluation in second difference");
    return v;
  };
  const double hi = fd_step(step, x[i]);
  if (i == j) {
    auto f0 = eval(0.0, 0.0);
    return (eval(hi, 0.0) - 2.0 * f0 + eval(-hi, 0.0)) * (1.0 / (hi * hi));
  }
  const double hj = fd_step(step, x[j]);
  return (eval(hi, hj) - eval(hi, -hj) - eval(-hi, hj) + eval(-hi, -hj)) *
         (1.0 / (4.0 * hi * hj));
}

double central_diff(const ScalarFunction& f, std::span<const double> x, std::size_t i,
                    double step = 1e-4);
double second_diff(const ScalarFunction& f, std::span<const double> x, std::size_t i,
                   std::size_t j, double step = 1e-4);
Vec gradient(const ScalarFunction& f, std::span<const double> x, double step = 1e-4);
Mat hessian(const ScalarFunction& f, std::span<const double> x, double step = 1e-4);

}  // namespace warpcheck
