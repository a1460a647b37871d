#include "warpcheck/chart.hpp"

#include <cmath>

namespace warpcheck {

Mat ChartMetric::at(std::span<const double> x) const {
  if (x.size() != dim)
    throw Error(ErrorKind::invalid_input, "chart point has wrong dimension");
  Mat m = g(x);
  if (m.rows() != dim || m.cols() != dim || !all_finite(m))
    throw Error(ErrorKind::degenerate_metric, "metric evaluation is malformed or non-finite");
  if (!is_symmetric(m, 1e-12 * std::max(1.0, max_abs(m))))
    throw Error(ErrorKind::degenerate_metric, "metric is not symmetric");
  const SymEigen eig = sym_eigen(m, 1e-12 * std::max(1.0, max_abs(m)));
  if (!(eig.values[0] > 1e-12))
    throw Error(ErrorKind::degenerate_metric, "metric is not positive definite");
  return m;
}

Christoffel& Christoffel::operator+=(const Christoffel& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Christoffel& Christoffel::operator-=(const Christoffel& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Christoffel& Christoffel::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

bool is_finite_value(const Christoffel& c) {
  for (double v : c.a_)
    if (!std::isfinite(v)) return false;
  return true;
}

double CurvaturePoint::contract(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const {
  const std::size_t n = riemann.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (X[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (Y[j] == 0.0) continue;
      const double xy = X[i] * Y[j];
      for (std::size_t k = 0; k < n; ++k) {
        if (Z[k] == 0.0) continue;
        for (std::size_t l = 0; l < n; ++l) s += xy * Z[k] * W[l] * riemann(i, j, k, l);
      }
    }
  }
  return s;
}

namespace {

std::vector<Mat> metric_derivatives(const ChartMetric& metric, std::span<const double> x,
                                    double step) {
  if (metric.dg) return metric.dg(x);
  std::vector<Mat> d;
  d.reserve(metric.dim);
  for (std::size_t k = 0; k < metric.dim; ++k) d.push_back(central_diff_of(metric.g, x, k, step));
  return d;
}

}  // namespace

Christoffel christoffel(const ChartMetric& metric, std::span<const double> x, double step) {
  const std::size_t n = metric.dim;
  const Mat g = metric.at(x);
  Mat ginv;
  try {
    ginv = inverse_spd(g);
  } catch (const Error&) {
    throw Error(ErrorKind::degenerate_metric, "christoffel: singular metric");
  }
  const std::vector<Mat> dg = metric_derivatives(metric, x, step);

  // first kind: Γ_{ijl} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
  std::vector<double> first(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        first[(i * n + j) * n + l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));

  Christoffel gamma(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += ginv(k, l) * first[(i * n + j) * n + l];
        gamma(k, i, j) = gamma(k, j, i) = s;
      }
  return gamma;
}

CurvaturePoint riemann(const ChartMetric& metric, std::span<const double> x, FdSteps steps) {
  const std::size_t n = metric.dim;
  CurvaturePoint cp;
  cp.x = Vec(std::vector<double>(x.begin(), x.end()));
  cp.g = metric.at(x);
  cp.gamma = christoffel(metric, x, steps.metric);

  auto gamma_at = [&](std::span<const double> y) { return christoffel(metric, y, steps.metric); };
  std::vector<Christoffel> dgamma;
  dgamma.reserve(n);
  for (std::size_t m = 0; m < n; ++m) dgamma.push_back(central_diff_of(gamma_at, x, m, steps.connection));

  // R^l_{ijk} = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_ip Γ^p_jk − Γ^l_jp Γ^p_ik
  const Christoffel& G = cp.gamma;
  std::vector<double> up(n * n * n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double s = dgamma[i](l, j, k) - dgamma[j](l, i, k);
          for (std::size_t p = 0; p < n; ++p) s += G(l, i, p) * G(p, j, k) - G(l, j, p) * G(p, i, k);
          up[((l * n + i) * n + j) * n + k] = s;
        }

  cp.riemann = Riemann4(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double s = 0.0;
          for (std::size_t p = 0; p < n; ++p) s += cp.g(l, p) * up[((p * n + i) * n + j) * n + k];
          cp.riemann(i, j, k, l) = s;
        }
  return cp;
}

double sectional_curvature(const CurvaturePoint& cp, const Vec& X, const Vec& Y, double tol) {
  const double xx = dot(X, cp.g * X);
  const double yy = dot(Y, cp.g * Y);
  const double xy = dot(X, cp.g * Y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 > tol * tol * std::max(1.0, xx * yy)))
    throw Error(ErrorKind::degenerate_plane, "sectional_curvature: X and Y are dependent");
  return cp.contract(X, Y, Y, X) / area2;
}

double plane_scalar_curvature(const CurvaturePoint& cp, std::span<const Vec> basis, double tol) {
  std::vector<Vec> e;
  try {
    e = gram_schmidt(basis, metric_inner(cp.g), tol);
  } catch (const Error&) {
    throw Error(ErrorKind::degenerate_plane, "plane_scalar_curvature: degenerate basis");
  }
  double tau = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) tau += cp.contract(e[i], e[j], e[j], e[i]);
  return tau;
}

double laplacian(const ChartMetric& metric, const ScalarFunction& f, std::span<const double> x,
                 double step) {
  const std::size_t n = metric.dim;
  const Mat ginv = inverse_spd(metric.at(x));
  const Christoffel gamma = christoffel(metric, x, step);
  const Vec grad = gradient(f, x, step);
  const Mat hess = hessian(f, x, step);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double cov = hess(i, j);
      for (std::size_t k = 0; k < n; ++k) cov -= gamma(k, i, j) * grad[k];
      s += ginv(i, j) * cov;
    }
  return -s;
}

namespace charts {

ChartMetric euclidean(std::size_t n) {
  ChartMetric m;
  m.dim = n;
  m.g = [n](std::span<const double>) { return Mat::identity(n); };
  m.dg = [n](std::span<const double>) { return std::vector<Mat>(n, Mat(n, n)); };
  return m;
}

namespace {

// Diagonal of the round S^k metric in latitude coordinates.
Vec round_sphere_diagonal(std::span<const double> c) {
  const std::size_t k = c.size();
  Vec d(k, 1.0);
  double scale = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    d[i] = scale;
    if (i + 1 < k) scale *= std::cos(c[i]) * std::cos(c[i]);
  }
  return d;
}

}  // namespace

ChartMetric round_sphere(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::invalid_parameter, "round_sphere: dimension must be >= 1");
  ChartMetric m;
  m.dim = k;
  m.g = [](std::span<const double> c) { return Mat::diagonal(round_sphere_diagonal(c)); };
  return m;
}

Vec round_sphere_point(std::span<const double> c) {
  const std::size_t k = c.size();
  if (k == 1) return Vec{std::cos(c[0]), std::sin(c[0])};
  const Vec inner = round_sphere_point(c.subspan(1));
  Vec p(k + 1);
  p[0] = std::sin(c[0]);
  for (std::size_t i = 0; i < inner.size(); ++i) p[i + 1] = std::cos(c[0]) * inner[i];
  return p;
}

ChartMetric hyperbolic_plane() {
  ChartMetric m;
  m.dim = 2;
  m.g = [](std::span<const double> x) {
    const double ch = std::cosh(x[0]);
    return Mat{{1.0, 0.0}, {0.0, ch * ch}};
  };
  return m;
}

ChartMetric constant_curvature_2d(double c) {
  ChartMetric m;
  m.dim = 2;
  m.g = [c](std::span<const double> x) {
    const double t = x[0];
    double s = t;
    if (c > 0.0) s = std::sin(std::sqrt(c) * t) / std::sqrt(c);
    if (c < 0.0) s = std::sinh(std::sqrt(-c) * t) / std::sqrt(-c);
    return Mat{{1.0, 0.0}, {0.0, s * s}};
  };
  return m;
}

}  // namespace charts

}  // namespace warpcheck
