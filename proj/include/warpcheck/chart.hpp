#pragma once

// Finite-difference Riemannian geometry on a coordinate chart.
//
// Conventions:
//   R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z,
//   R(X,Y,Z,W) = <R(X,Y)Z, W>,
//   K(X∧Y) = R(X,Y,Y,X) / (|X|²|Y|² − <X,Y>²),
// so the round sphere has K = +1. The Laplacian is the geometers' one,
// Δf = −div grad f, which makes Δ(cos t)/cos t = +1 on the line.

#include <functional>
#include <span>
#include <vector>

#include "warpcheck/numeric.hpp"

namespace warpcheck {

using MetricFunction = std::function<Mat(std::span<const double>)>;
/// Returns {∂_0 g, ..., ∂_{n-1} g} at a point.
using MetricDerivative = std::function<std::vector<Mat>(std::span<const double>)>;

struct ChartMetric {
  std::size_t dim = 0;
  MetricFunction g;
  MetricDerivative dg;  // optional; central differences are used when empty

  /// Metric at x, checked symmetric positive definite (smallest eigenvalue > 1e-12).
  Mat at(std::span<const double> x) const;
};

/// Γ^k_ij stored densely; symmetric in (i, j).
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(std::size_t n) : n_(n), a_(n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t k, std::size_t i, std::size_t j) { return a_[(k * n_ + i) * n_ + j]; }
  double operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return a_[(k * n_ + i) * n_ + j];
  }

  Christoffel& operator+=(const Christoffel& o);
  Christoffel& operator-=(const Christoffel& o);
  Christoffel& operator*=(double s);
  friend Christoffel operator-(Christoffel a, const Christoffel& b) { return a -= b; }
  friend Christoffel operator*(Christoffel a, double s) { return a *= s; }

 private:
  friend bool is_finite_value(const Christoffel& c);
  std::size_t n_ = 0;
  std::vector<double> a_;
};

bool is_finite_value(const Christoffel& c);

/// Fully covariant curvature R_ijkl = R(∂_i, ∂_j, ∂_k, ∂_l).
class Riemann4 {
 public:
  Riemann4() = default;
  explicit Riemann4(std::size_t n) : n_(n), a_(n * n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return a_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return a_[((i * n_ + j) * n_ + k) * n_ + l];
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct CurvaturePoint {
  Vec x;
  Mat g;
  Christoffel gamma;
  Riemann4 riemann;

  /// R(X,Y,Z,W) for coordinate-component vectors.
  double contract(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const;
};

/// Step sizes for the nested differences: metric derivatives, then the
/// derivative of Γ.
struct FdSteps {
  double metric = 1e-4;
  double connection = 1e-3;
};

Christoffel christoffel(const ChartMetric& metric, std::span<const double> x,
                        double step = FdSteps{}.metric);

CurvaturePoint riemann(const ChartMetric& metric, std::span<const double> x, FdSteps steps = {});

double sectional_curvature(const CurvaturePoint& cp, const Vec& X, const Vec& Y,
                           double tol = 1e-10);

/// τ of the plane spanned by `basis` (orthonormalized internally).
double plane_scalar_curvature(const CurvaturePoint& cp, std::span<const Vec> basis,
                              double tol = 1e-10);

/// Δf = −g^{ij}(∂_i∂_j f − Γ^k_ij ∂_k f).
double laplacian(const ChartMetric& metric, const ScalarFunction& f, std::span<const double> x,
                 double step = 1e-4);

namespace charts {

ChartMetric euclidean(std::size_t n);

/// Round unit sphere S^k in latitude coordinates (t_1, ..., t_{k-1}, θ):
/// S^k = (−π/2, π/2) ×_{cos t_1} S^{k−1}, with S^1 the unit circle.
ChartMetric round_sphere(std::size_t k);
/// Embedding of the same chart into R^{k+1}.
Vec round_sphere_point(std::span<const double> coords);

/// Hyperbolic plane as diag(1, cosh² t).
ChartMetric hyperbolic_plane();

/// Constant-curvature 2-chart diag(1, s_c(t)²) with s_c the generalized sine.
ChartMetric constant_curvature_2d(double c);

}  // namespace charts

}  // namespace warpcheck
