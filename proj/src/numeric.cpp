#include "warpcheck/numeric.hpp"

#include <numeric>
#include <string>

namespace warpcheck {

void Tolerance::validate() const {
  if (!(algebraic > 0.0) || !(finite_difference > 0.0) || !(equality_gap > 0.0))
    throw Error(ErrorKind::invalid_parameter, "tolerances must be strictly positive");
}

// ---------------------------------------------------------------- Vec

Vec& Vec::operator+=(const Vec& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator-(Vec a) { return a *= -1.0; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator*(Vec a, double s) { return a *= s; }

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------- Mat

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::invalid_input, "ragged matrix literal");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(const Vec& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::from_columns(std::span<const Vec> columns) {
  if (columns.empty()) return {};
  Mat m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_col(j, columns[j]);
  return m;
}

Vec Mat::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Mat::row(std::size_t i) const {
  Vec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

void Mat::set_col(std::size_t j, const Vec& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat& Mat::operator+=(const Mat& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }
Mat operator*(Mat a, double s) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const Mat& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

bool all_finite(const Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j))) return false;
  return true;
}

double trace(const Mat& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

bool is_symmetric(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

Mat cholesky(const Mat& spd) {
  const std::size_t n = spd.rows();
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw Error(ErrorKind::degenerate_metric, "matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Mat inverse_spd(const Mat& spd) {
  const std::size_t n = spd.rows();
  const Mat l = cholesky(spd);
  Mat inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    // forward then backward substitution on the unit vector e_c
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * inv(k, c);
      inv(ii, c) = s / l(ii, ii);
    }
  }
  return inv;
}

// ---------------------------------------------------------------- frames

InnerProduct euclidean_inner() {
  return [](const Vec& a, const Vec& b) { return dot(a, b); };
}

InnerProduct metric_inner(Mat g) {
  return [g = std::move(g)](const Vec& a, const Vec& b) { return dot(a, g * b); };
}

std::vector<Vec> gram_schmidt(std::span<const Vec> vectors, const InnerProduct& inner,
                              double tol) {
  std::vector<Vec> out;
  out.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    Vec v = vectors[k];
    for (const Vec& q : out) v -= inner(q, v) * q;
    const double nn = inner(v, v);
    if (!(nn > tol * tol))
      throw Error(ErrorKind::degenerate_input,
                  "gram_schmidt: vector " + std::to_string(k) + " is dependent on its predecessors");
    v *= 1.0 / std::sqrt(nn);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec> complete_orthonormal(std::span<const Vec> seed, std::span<const Vec> candidates,
                                      std::size_t target, const InnerProduct& inner,
                                      double tol) {
  std::vector<Vec> out = gram_schmidt(seed, inner);
  for (const Vec& c : candidates) {
    if (out.size() >= target) break;
    Vec v = c;
    // two passes keep the completion orthogonal to rounding level
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : out) v -= inner(q, v) * q;
    const double nn = inner(v, v);
    if (nn <= tol * tol) continue;
    v *= 1.0 / std::sqrt(nn);
    out.push_back(std::move(v));
  }
  if (out.size() < target)
    throw Error(ErrorKind::degenerate_input, "complete_orthonormal: candidates do not span");
  return out;
}

SymEigen sym_eigen(const Mat& m, double symmetry_tol) {
  const std::size_t n = m.rows();
  if (m.cols() != n || !is_symmetric(m, symmetry_tol))
    throw Error(ErrorKind::invalid_input, "sym_eigen: matrix is not symmetric");
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "sym_eigen: non-finite entries");

  Mat a = m;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  Mat v = Mat::identity(n);

  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  const double threshold = 1e-13 * std::max(1.0, std::sqrt(frob));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() >= threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out{Vec(n), Mat(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.set_col(k, v.col(order[k]));
  }
  return out;
}

// ---------------------------------------------------------------- differences

double central_diff(const ScalarFunction& f, std::span<const double> x, std::size_t i,
                    double step) {
  return central_diff_of(f, x, i, step);
}

double second_diff(const ScalarFunction& f, std::span<const double> x, std::size_t i,
                   std::size_t j, double step) {
  return second_diff_of(f, x, i, j, step);
}

Vec gradient(const ScalarFunction& f, std::span<const double> x, double step) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = central_diff(f, x, i, step);
  return g;
}

Mat hessian(const ScalarFunction& f, std::span<const double> x, double step) {
  const std::size_t n = x.size();
  Mat h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) h(i, j) = h(j, i) = second_diff(f, x, i, j, step);
  return h;
}

}  // namespace warpcheck
