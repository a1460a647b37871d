#include "warpcheck/warped.hpp"

#include <cmath>
#include <numbers>

#include "warpcheck/descriptor.hpp"

namespace warpcheck {

// ---------------------------------------------------------------- WarpFunction

WarpFunction WarpFunction::constant(double a) {
  WarpFunction w;
  w.kind_ = Kind::constant;
  w.a_ = a;
  return w;
}

WarpFunction WarpFunction::cosine(std::size_t coord) {
  WarpFunction w;
  w.kind_ = Kind::cosine;
  w.coord_ = coord;
  return w;
}

WarpFunction WarpFunction::exponential(std::size_t coord) {
  WarpFunction w;
  w.kind_ = Kind::exponential;
  w.coord_ = coord;
  return w;
}

WarpFunction WarpFunction::polynomial(std::vector<double> coeffs, std::size_t coord) {
  if (coeffs.empty()) throw Error(ErrorKind::validation, "polynomial needs at least one coefficient");
  WarpFunction w;
  w.kind_ = Kind::polynomial;
  w.coeffs_ = std::move(coeffs);
  w.coord_ = coord;
  return w;
}

WarpFunction WarpFunction::sum(std::vector<WarpFunction> terms) {
  if (terms.empty()) throw Error(ErrorKind::validation, "sum needs at least one term");
  WarpFunction w;
  w.kind_ = Kind::sum;
  w.children_ = std::move(terms);
  return w;
}

WarpFunction WarpFunction::product(std::vector<WarpFunction> factors) {
  if (factors.empty()) throw Error(ErrorKind::validation, "product needs at least one factor");
  WarpFunction w;
  w.kind_ = Kind::product;
  w.children_ = std::move(factors);
  return w;
}

double WarpFunction::operator()(std::span<const double> x) const {
  switch (kind_) {
    case Kind::constant: return a_;
    case Kind::cosine: return std::cos(x[coord_]);
    case Kind::exponential: return std::exp(x[coord_]);
    case Kind::polynomial: {
      double s = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) s = s * x[coord_] + coeffs_[i];
      return s;
    }
    case Kind::sum: {
      double s = 0.0;
      for (const auto& c : children_) s += c(x);
      return s;
    }
    case Kind::product: {
      double p = 1.0;
      for (const auto& c : children_) p *= c(x);
      return p;
    }
  }
  return 0.0;
}

ScalarFunction WarpFunction::as_function() const {
  return [w = *this](std::span<const double> x) { return w(x); };
}

std::size_t WarpFunction::max_coord() const {
  std::size_t m = (kind_ == Kind::constant || kind_ == Kind::sum || kind_ == Kind::product) ? 0 : coord_;
  for (const auto& c : children_) m = std::max(m, c.max_coord());
  return m;
}

// ---------------------------------------------------------------- WarpedProductChart

double WarpedProductChart::warp_at(std::span<const double> product_point) const {
  const double f = warp(product_point.first(n1()));
  if (!(f > 0.0) || !std::isfinite(f))
    throw Error(ErrorKind::invalid_warping, "warping function is not positive at the queried point");
  return f;
}

ChartMetric build_metric(const WarpedProductChart& wp) {
  if (wp.n1() == 0 || wp.n2() == 0)
    throw Error(ErrorKind::invalid_input, "warped product factors must have dimension >= 1");
  ChartMetric m;
  m.dim = wp.dim();
  m.g = [wp](std::span<const double> x) {
    const std::size_t n1 = wp.n1();
    const std::size_t n2 = wp.n2();
    const double f = wp.warp_at(x);
    const Mat g1 = wp.factor1.g(x.first(n1));
    const Mat g2 = wp.factor2.g(x.subspan(n1, n2));
    Mat g(n1 + n2, n1 + n2);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) g(i, j) = g1(i, j);
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < n2; ++j) g(n1 + i, n1 + j) = f * f * g2(i, j);
    return g;
  };
  return m;
}

namespace {

void require_block(const Vec& v, std::size_t begin, std::size_t end, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if ((i < begin || i >= end) && v[i] != 0.0)
      throw Error(ErrorKind::invalid_input, std::string(what) + " has components outside its block");
}

}  // namespace

double check_connection_identity(const WarpedProductChart& wp, std::span<const double> x,
                                 const Vec& X, const Vec& Y, double step) {
  const std::size_t n = wp.dim();
  if (X.size() != n || Y.size() != n || x.size() != n)
    throw Error(ErrorKind::invalid_input, "dimension mismatch");
  require_block(X, 0, wp.n1(), "X");
  require_block(Y, wp.n1(), n, "Y");

  const ChartMetric metric = build_metric(wp);
  const Mat g = metric.at(x);
  const Christoffel gamma = christoffel(metric, x, step);
  const double f = wp.warp_at(x);
  const Vec df = gradient(wp.warp, x.first(wp.n1()), step);
  double xf = 0.0;
  for (std::size_t i = 0; i < wp.n1(); ++i) xf += X[i] * df[i];

  Vec nabla_xy(n);
  Vec nabla_yx(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        nabla_xy[k] += gamma(k, i, j) * X[i] * Y[j];
        nabla_yx[k] += gamma(k, i, j) * Y[i] * X[j];
      }
  const Vec expected = (xf / f) * Y;
  const Vec r1 = nabla_xy - expected;
  const Vec r2 = nabla_yx - expected;
  return std::max(std::sqrt(std::max(0.0, dot(r1, g * r1))), std::sqrt(std::max(0.0, dot(r2, g * r2))));
}

double mixed_sectional(const WarpedProductChart& wp, std::span<const double> x, const Vec& X,
                       const Vec& Z, double step) {
  const std::size_t n = wp.dim();
  const std::size_t n1 = wp.n1();
  if (X.size() != n || Z.size() != n || x.size() != n)
    throw Error(ErrorKind::invalid_input, "dimension mismatch");
  require_block(X, 0, n1, "X");
  require_block(Z, n1, n, "Z");
  const Mat g = build_metric(wp).at(x);
  if (std::abs(dot(X, g * X) - 1.0) > 1e-8 || std::abs(dot(Z, g * Z) - 1.0) > 1e-8)
    throw Error(ErrorKind::invalid_input, "mixed_sectional expects unit vectors");

  const auto x1 = x.first(n1);
  const double f = wp.warp_at(x);
  const Christoffel gamma1 = christoffel(wp.factor1, x1, step);
  const Vec df = gradient(wp.warp, x1, step);
  const Mat d2f = hessian(wp.warp, x1, step);
  double nabla_xx_f = 0.0;
  double xxf = 0.0;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      xxf += X[i] * X[j] * d2f(i, j);
      for (std::size_t k = 0; k < n1; ++k) nabla_xx_f += gamma1(k, i, j) * X[i] * X[j] * df[k];
    }
  return (nabla_xx_f - xxf) / f;
}

LaplacianRatioReport check_laplacian_ratio(const WarpedProductChart& wp,
                                           std::span<const double> x, FdSteps steps) {
  const std::size_t n = wp.dim();
  const std::size_t n1 = wp.n1();
  if (x.size() != n) throw Error(ErrorKind::invalid_input, "dimension mismatch");
  const ChartMetric metric = build_metric(wp);
  const CurvaturePoint cp = riemann(metric, x, steps);
  const auto inner = metric_inner(cp.g);

  std::vector<Vec> block1;
  std::vector<Vec> block2;
  for (std::size_t i = 0; i < n; ++i) (i < n1 ? block1 : block2).push_back(Vec::unit(n, i));
  const std::vector<Vec> e1 = gram_schmidt(block1, inner);
  const std::vector<Vec> e2 = gram_schmidt(block2, inner);

  LaplacianRatioReport r;
  r.laplacian_ratio = laplacian(wp.factor1, wp.warp, x.first(n1), steps.metric) / wp.warp_at(x);
  for (const Vec& es : e2) {
    double s = 0.0;
    for (const Vec& ej : e1) s += cp.contract(ej, es, es, ej);
    r.per_fibre_sums.push_back(s);
  }
  for (std::size_t a = 0; a < r.per_fibre_sums.size(); ++a) {
    r.max_deviation = std::max(r.max_deviation, std::abs(r.per_fibre_sums[a] - r.laplacian_ratio));
    for (std::size_t b = a + 1; b < r.per_fibre_sums.size(); ++b)
      r.max_pairwise = std::max(r.max_pairwise, std::abs(r.per_fibre_sums[a] - r.per_fibre_sums[b]));
  }
  return r;
}

bool is_trivial(const WarpedProductChart& wp, std::span<const Vec> samples, double tol) {
  if (samples.empty()) throw Error(ErrorKind::invalid_input, "is_trivial needs at least one sample");
  const double f0 = wp.warp(samples.front().span().first(wp.n1()));
  for (const Vec& s : samples)
    if (std::abs(wp.warp(s.span().first(wp.n1())) - f0) >= tol) return false;
  return true;
}

// ---------------------------------------------------------------- catalog

ChartMetric factor_metric(const std::string& key) {
  const Descriptor d = parse_descriptor(key);
  const std::size_t k = descriptor_count(d, 0, 1);
  if (k == 0) throw Error(ErrorKind::validation, key + ": dimension must be >= 1");
  if (d.name == "euclidean") return charts::euclidean(k);
  if (d.name == "round-sphere") return charts::round_sphere(k);
  throw Error(ErrorKind::validation, "unknown factor metric '" + key + "'");
}

namespace {

// Sampling box for the latitude chart of S^k (stays away from the poles).
void append_sphere_box(std::size_t k, Vec& lo, Vec& hi, std::size_t offset) {
  for (std::size_t i = 0; i < k; ++i) {
    const bool angle = (i + 1 == k);
    lo[offset + i] = angle ? -std::numbers::pi : -1.2;
    hi[offset + i] = angle ? std::numbers::pi : 1.2;
  }
}

}  // namespace

CatalogChart warped_catalog(const std::string& key) {
  const Descriptor d = parse_descriptor(key);
  CatalogChart out;
  WarpedProductChart& wp = out.chart;
  wp.name = key;
  if (d.name == "sphere") {
    // S^n = (−π/2, π/2) ×_{cos t} S^{n−1}
    const std::size_t n = descriptor_count(d, 0, 2);
    if (n < 2) throw Error(ErrorKind::validation, "sphere(n) needs n >= 2");
    wp.factor1 = charts::euclidean(1);
    wp.factor2 = charts::round_sphere(n - 1);
    wp.warp = WarpFunction::cosine().as_function();
    out.lo = Vec(n);
    out.hi = Vec(n);
    out.lo[0] = -1.2;
    out.hi[0] = 1.2;
    append_sphere_box(n - 1, out.lo, out.hi, 1);
  } else if (d.name == "hyperbolic") {
    // R ×_{e^t} R^k
    const std::size_t k = descriptor_count(d, 0, 1);
    if (k < 1) throw Error(ErrorKind::validation, "hyperbolic(k) needs k >= 1");
    wp.factor1 = charts::euclidean(1);
    wp.factor2 = charts::euclidean(k);
    wp.warp = WarpFunction::exponential().as_function();
    out.lo = Vec(k + 1, -2.0);
    out.hi = Vec(k + 1, 2.0);
    out.lo[0] = -1.0;
    out.hi[0] = 1.0;
  } else if (d.name == "cone") {
    // (0, ∞) ×_t S^1, flat away from the apex
    wp.factor1 = charts::euclidean(1);
    wp.factor2 = charts::round_sphere(1);
    wp.warp = WarpFunction::polynomial({0.0, 1.0}).as_function();
    out.lo = Vec{0.5, -std::numbers::pi};
    out.hi = Vec{2.0, std::numbers::pi};
  } else if (d.name == "flat-product") {
    const std::size_t n1 = descriptor_count(d, 0, 1);
    const std::size_t n2 = descriptor_count(d, 1, 1);
    if (n1 < 1 || n2 < 1) throw Error(ErrorKind::validation, "flat-product needs n1, n2 >= 1");
    wp.factor1 = charts::euclidean(n1);
    wp.factor2 = charts::euclidean(n2);
    wp.warp = WarpFunction::constant(1.0).as_function();
    out.lo = Vec(n1 + n2, -2.0);
    out.hi = Vec(n1 + n2, 2.0);
  } else {
    throw Error(ErrorKind::validation, "unknown warped chart '" + key + "'");
  }
  return out;
}

std::vector<std::string> warped_catalog_keys() {
  return {"sphere", "sphere(n)", "hyperbolic", "hyperbolic(k)", "cone", "flat-product",
          "flat-product(n1,n2)"};
}

}  // namespace warpcheck
