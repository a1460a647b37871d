#include "warpcheck/immersion.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <sstream>

#include "warpcheck/descriptor.hpp"

namespace warpcheck {

Vec PointwiseImmersionData::sigma_vec(std::size_t i, std::size_t j) const {
  Vec v(sigma.size());
  for (std::size_t r = 0; r < sigma.size(); ++r) v[r] = sigma[r](i, j);
  return v;
}

void validate(const PointwiseImmersionData& d, double tol) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_configuration, what); };
  if (d.n1 < 1 || d.n2 < 1) fail("both factors need dimension >= 1");
  if (d.n() >= d.ambient_dim + 1) fail("submanifold dimension exceeds the ambient dimension");
  if (d.codim() < 1) fail("codimension must be at least 1");
  if (d.frame.rows() != d.ambient_dim || d.frame.cols() != d.ambient_dim)
    fail("frame must be ambient_dim x ambient_dim");
  if (d.sigma.size() != d.codim()) fail("sigma needs one matrix per normal direction");
  if (!d.oracle || d.oracle.dim() != d.ambient_dim) fail("curvature oracle dimension mismatch");
  if (d.contact && d.contact->dim() != d.ambient_dim) fail("contact frame dimension mismatch");
  const Mat gram = d.frame.transposed() * d.frame;
  if (max_abs(gram - Mat::identity(d.ambient_dim)) > tol) fail("frame is not orthonormal");
  for (const Mat& s : d.sigma) {
    if (s.rows() != d.n() || s.cols() != d.n()) fail("sigma components must be n x n");
    if (!all_finite(s)) fail("sigma has non-finite entries");
    if (!is_symmetric(s, tol)) fail("sigma is not symmetric");
  }
}

double sigma_norm2(const PointwiseImmersionData& d) {
  double s = 0.0;
  for (const Mat& m : d.sigma)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return s;
}

// ------------------------------------------------------------ chart mode

PointwiseImmersionData second_fundamental_form(const ChartImmersion& im,
                                               std::span<const double> p, FdSteps steps) {
  const std::size_t n = im.source_dim;
  const std::size_t N = im.ambient.dim;
  if (p.size() != n) throw Error(ErrorKind::invalid_input, "point has the wrong dimension");
  if (im.n1 + im.n2 != n) throw Error(ErrorKind::invalid_configuration, "n1 + n2 != source dimension");
  if (n >= N) throw Error(ErrorKind::invalid_configuration, "immersion needs codimension >= 1");

  const Vec x0 = im.map(p);
  std::vector<Vec> J;
  for (std::size_t i = 0; i < n; ++i) J.push_back(central_diff_of(im.map, p, i, steps.metric));
  const Mat gt = im.ambient.at(x0.span());
  const InnerProduct amb = metric_inner(gt);

  Mat G(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) G(i, j) = amb(J[i], J[j]);
  if (sym_eigen(G, 1e-8).values[0] <= 1e-10)
    throw Error(ErrorKind::immersion_degeneracy, "Jacobian is rank deficient at this point");

  std::vector<Vec> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(Vec::unit(n, i));
  std::vector<Vec> C;
  try {
    C = gram_schmidt(coords, metric_inner(G));
  } catch (const Error&) {
    throw Error(ErrorKind::immersion_degeneracy, "induced metric is degenerate");
  }

  std::vector<Vec> tangents;
  for (const Vec& c : C) {
    Vec t(N);
    for (std::size_t i = 0; i < n; ++i) t += c[i] * J[i];
    tangents.push_back(std::move(t));
  }
  std::vector<Vec> candidates;
  for (std::size_t k = 0; k < N; ++k) candidates.push_back(Vec::unit(N, k));
  std::vector<Vec> basis = complete_orthonormal(tangents, candidates, N, amb);

  // ∇̃_{∂i} ∂_j x in ambient coordinates
  const Christoffel gam = christoffel(im.ambient, x0.span(), steps.metric);
  std::vector<std::vector<Vec>> V(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Vec v = second_diff_of(im.map, p, i, j, steps.metric);
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t a = 0; a < N; ++a)
          for (std::size_t b = 0; b < N; ++b) v[k] += gam(k, a, b) * J[i][a] * J[j][b];
      V[i][j] = v;
      V[j][i] = std::move(v);
    }

  PointwiseImmersionData d;
  d.n1 = im.n1;
  d.n2 = im.n2;
  d.ambient_dim = N;
  d.frame = Mat::identity(N);
  for (std::size_t r = 0; r < N - n; ++r) {
    Vec& nu = basis[n + r];
    Mat coord_sigma(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) coord_sigma(i, j) = amb(V[i][j], nu);
    Mat s(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) v += C[a][i] * C[b][j] * coord_sigma(i, j);
        s(a, b) = v;
      }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) s(a, b) = s(b, a) = 0.5 * (s(a, b) + s(b, a));
    if (trace(s) < 0.0) {
      s *= -1.0;
      nu *= -1.0;
    }
    d.sigma.push_back(std::move(s));
  }

  auto cp = std::make_shared<CurvaturePoint>(riemann(im.ambient, x0.span(), steps));
  auto B = std::make_shared<std::vector<Vec>>(basis);
  auto to_coords = [B](const Vec& X) {
    Vec y((*B)[0].size());
    for (std::size_t a = 0; a < X.size(); ++a) y += X[a] * (*B)[a];
    return y;
  };
  d.oracle = CurvatureOracle(
      OracleKind::chart_numeric, N,
      [cp, to_coords](const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) {
        return cp->contract(to_coords(X), to_coords(Y), to_coords(Z), to_coords(W));
      },
      "chart:" + im.name);

  if (im.warped) {
    const CurvaturePoint src = riemann(build_metric(*im.warped), p, steps);
    Riemann4 R(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t e = 0; e < n; ++e) R(a, b, c, e) = src.contract(C[a], C[b], C[c], C[e]);
    d.intrinsic = std::move(R);
  }
  return d;
}

double chart_laplacian_ratio(const ChartImmersion& im, std::span<const double> p, double step) {
  if (!im.warped)
    throw Error(ErrorKind::invalid_configuration, "immersion source is not a warped product");
  const WarpedProductChart& wp = *im.warped;
  return laplacian(wp.factor1, wp.warp, p.first(wp.n1()), step) / wp.warp_at(p);
}

// ------------------------------------------------------------ invariants

MeanCurvatureRecord mean_curvatures(const PointwiseImmersionData& d) {
  const std::size_t q = d.codim();
  MeanCurvatureRecord m;
  m.H = Vec(q);
  m.H1 = Vec(q);
  m.H2 = Vec(q);
  for (std::size_t r = 0; r < q; ++r) {
    double t1 = 0.0, t2 = 0.0;
    for (std::size_t i = 0; i < d.n1; ++i) t1 += d.sigma[r](i, i);
    for (std::size_t s = d.n1; s < d.n(); ++s) t2 += d.sigma[r](s, s);
    m.H[r] = (t1 + t2) / static_cast<double>(d.n());
    m.H1[r] = t1 / static_cast<double>(d.n1);
    m.H2[r] = t2 / static_cast<double>(d.n2);
  }
  m.norm_H = norm(m.H);
  m.norm_H1 = norm(m.H1);
  m.norm_H2 = norm(m.H2);
  m.additivity_residual = max_abs(static_cast<double>(d.n()) * m.H -
                                  static_cast<double>(d.n1) * m.H1 -
                                  static_cast<double>(d.n2) * m.H2);
  return m;
}

double gauss_curvature(const PointwiseImmersionData& d, std::size_t a, std::size_t b,
                       std::size_t c, std::size_t e) {
  return d.oracle(d.tangent(a), d.tangent(b), d.tangent(c), d.tangent(e)) +
         dot(d.sigma_vec(a, e), d.sigma_vec(b, c)) - dot(d.sigma_vec(a, c), d.sigma_vec(b, e));
}

double gauss_sectional(const PointwiseImmersionData& d, std::size_t i, std::size_t j) {
  return gauss_curvature(d, i, j, j, i);
}

GaussReport gauss_residual(const PointwiseImmersionData& d, IntrinsicSource source) {
  validate(d, 1e-8);
  if (source == IntrinsicSource::chart && !d.intrinsic)
    throw Error(ErrorKind::invalid_configuration, "no chart curvature attached to this data");
  const std::size_t n = d.n();
  auto intrinsic = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    return source == IntrinsicSource::chart ? (*d.intrinsic)(a, b, c, e)
                                            : gauss_curvature(d, a, b, c, e);
  };
  GaussReport g;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e)
          g.max_gauss = std::max(g.max_gauss,
                                 std::abs(intrinsic(a, b, c, e) - gauss_curvature(d, a, b, c, e)));

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double K = intrinsic(i, j, j, i);
      const double Kt = d.oracle.sectional(d.tangent(i), d.tangent(j));
      double ext = 0.0;
      for (const Mat& s : d.sigma) ext += s(i, i) * s(j, j) - s(i, j) * s(i, j);
      g.max_kij = std::max(g.max_kij, std::abs(K - Kt - ext));
      g.tau += K;
      g.tau_ambient += Kt;
    }
  const MeanCurvatureRecord m = mean_curvatures(d);
  g.norm_H2 = m.norm_H * m.norm_H;
  g.sigma_norm2 = sigma_norm2(d);
  const double nn = static_cast<double>(n * n);
  g.tau_identity = std::abs(2.0 * g.tau - 2.0 * g.tau_ambient - nn * g.norm_H2 + g.sigma_norm2);
  return g;
}

CTotallyRealReport is_C_totally_real(const PointwiseImmersionData& d, double tol) {
  if (!d.contact) throw Error(ErrorKind::invalid_configuration, "no contact structure attached");
  const ContactFrame& cf = *d.contact;
  CTotallyRealReport r;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const Vec e = d.tangent(i);
    r.xi_tangential = std::max(r.xi_tangential, std::abs(dot(cf.xi, e)));
    const Vec pe = cf.phi * e;
    for (std::size_t j = 0; j < d.n(); ++j)
      r.phi_tangential = std::max(r.phi_tangential, std::abs(dot(pe, d.tangent(j))));
  }
  r.value = r.xi_tangential < tol && r.phi_tangential < tol;
  return r;
}

BlockQuantities block_quantities(const Mat& m, std::size_t n1) {
  BlockQuantities q;
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    q.trace += m(i, i);
    (i < n1 ? q.trace1 : q.trace2) += m(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j) * m(i, j);
      q.norm2 += v;
      if (i < n1 && j < n1) q.norm2_1 += v;
      if (i >= n1 && j >= n1) q.norm2_2 += v;
    }
  }
  return q;
}

AXiReport a_xi_identity(const PointwiseImmersionData& d) {
  if (!d.contact) throw Error(ErrorKind::invalid_configuration, "no contact structure attached");
  const ContactFrame& cf = *d.contact;
  const std::size_t n = d.n();
  const Mat phi_h = cf.phi * cf.h;
  Vec xi_normal(d.codim());
  for (std::size_t r = 0; r < d.codim(); ++r) xi_normal[r] = dot(cf.xi, d.normal(r));

  AXiReport a;
  a.h_t = Mat(n, n);
  a.phi_h_t = Mat(n, n);
  a.a_xi = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec e = d.tangent(i);
    const Vec he = cf.h * e;
    const Vec phe = phi_h * e;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec f = d.tangent(j);
      a.h_t(i, j) = dot(he, f);
      a.phi_h_t(i, j) = dot(phe, f);
      a.a_xi(i, j) = dot(d.sigma_vec(i, j), xi_normal);
      a.residual = std::max(a.residual, std::abs(a.a_xi(i, j) - a.phi_h_t(i, j)));
    }
  }
  a.h = block_quantities(a.h_t, d.n1);
  a.a = block_quantities(a.a_xi, d.n1);
  return a;
}

double mixed_residual(const PointwiseImmersionData& d) {
  double m = 0.0;
  for (const Mat& s : d.sigma)
    for (std::size_t j = 0; j < d.n1; ++j)
      for (std::size_t t = d.n1; t < d.n(); ++t) m = std::max(m, std::abs(s(j, t)));
  return m;
}

bool is_mixed_totally_geodesic(const PointwiseImmersionData& d, double tol) {
  return mixed_residual(d) < tol;
}

// ------------------------------------------------------------ synthetic data

namespace {

PointwiseImmersionData shell(std::size_t n1, std::size_t n2, const Ambient& ambient) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorKind::invalid_configuration, "n1 and n2 must be >= 1");
  if (n1 + n2 >= ambient.dim)
    throw Error(ErrorKind::invalid_configuration, "n = n1 + n2 must be below the ambient dimension");
  PointwiseImmersionData d;
  d.n1 = n1;
  d.n2 = n2;
  d.ambient_dim = ambient.dim;
  d.oracle = ambient.oracle;
  d.contact = ambient.contact;
  return d;
}

// Block-diagonal symmetric matrix with equal block traces.
Mat equality_block(Rng& rng, std::size_t n1, std::size_t n2, double scale) {
  const std::size_t n = n1 + n2;
  const Mat a = random_symmetric(rng, n, scale);
  Mat s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((i < n1) == (j < n1)) s(i, j) = a(i, j);
  double t1 = 0.0, t2 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) t1 += s(i, i);
  for (std::size_t i = n1; i < n; ++i) t2 += s(i, i);
  const double shift = (t1 - t2) / static_cast<double>(n2);
  for (std::size_t i = n1; i < n; ++i) s(i, i) += shift;
  return s;
}

Mat frame_from(const std::vector<Vec>& tangents, std::size_t N) {
  std::vector<Vec> candidates;
  for (std::size_t k = 0; k < N; ++k) candidates.push_back(Vec::unit(N, k));
  const std::vector<Vec> all = complete_orthonormal(tangents, candidates, N, euclidean_inner());
  return Mat::from_columns(all);
}

}  // namespace

PointwiseImmersionData random_immersion_data(Rng& rng, std::size_t n1, std::size_t n2,
                                             const Ambient& ambient, double scale) {
  PointwiseImmersionData d = shell(n1, n2, ambient);
  d.frame = random_orthogonal(rng, ambient.dim);
  for (std::size_t r = 0; r < d.codim(); ++r) d.sigma.push_back(random_symmetric(rng, d.n(), scale));
  return d;
}

PointwiseImmersionData equality_immersion_data(Rng& rng, std::size_t n1, std::size_t n2,
                                               const Ambient& ambient, double scale) {
  PointwiseImmersionData d = shell(n1, n2, ambient);
  d.frame = random_orthogonal(rng, ambient.dim);
  for (std::size_t r = 0; r < d.codim(); ++r) d.sigma.push_back(equality_block(rng, n1, n2, scale));
  return d;
}

PointwiseImmersionData c_totally_real_data(Rng& rng, std::size_t n1, std::size_t n2,
                                           const Ambient& ambient, bool equality, double scale) {
  if (!ambient.contact)
    throw Error(ErrorKind::invalid_configuration, "C-totally real data needs a contact ambient");
  const ContactFrame& cf = *ambient.contact;
  const std::size_t n = n1 + n2;
  if (n > cf.m)
    throw Error(ErrorKind::invalid_configuration, "C-totally real submanifolds need n <= m");
  PointwiseImmersionData d = shell(n1, n2, ambient);
  const std::size_t N = ambient.dim;

  std::vector<Vec> tangents;
  if (equality) {
    // e_i = cos θ_i u'_i + sin θ_i φu'_i gives (φh)ᵀ = diag(λ sin 2θ_i)
    const Mat Q = random_orthogonal(rng, cf.m);
    Vec theta(n);
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (double& t : theta) t = random_uniform(rng, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < n1; ++i) s1 += std::sin(2.0 * theta[i]);
      for (std::size_t i = n1; i + 1 < n; ++i) s2 += std::sin(2.0 * theta[i]);
      const double target = s1 - s2;
      if (std::abs(target) <= 1.0) {
        theta[n - 1] = 0.5 * std::asin(target);
        break;
      }
      if (attempt == 99) theta = Vec(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Vec u(N);
      for (std::size_t k = 0; k < cf.m; ++k) u[dplus_index(k)] = Q(k, i);
      tangents.push_back(std::cos(theta[i]) * u + std::sin(theta[i]) * (cf.phi * u));
    }
  } else {
    std::vector<Vec> excluded{cf.xi};
    while (tangents.size() < n) {
      Vec w = random_gaussian(rng, N);
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& q : excluded) w -= dot(q, w) * q;
      const double nw = norm(w);
      if (nw < 1e-3) continue;
      w *= 1.0 / nw;
      excluded.push_back(w);
      excluded.push_back(cf.phi * w);
      tangents.push_back(std::move(w));
    }
  }
  std::vector<Vec> seed = tangents;
  seed.push_back(cf.xi);
  d.frame = frame_from(seed, N);

  const Mat phi_h = cf.phi * cf.h;
  Mat sxi(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sxi(i, j) = dot(phi_h * d.tangent(i), d.tangent(j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sxi(i, j) = sxi(j, i) = 0.5 * (sxi(i, j) + sxi(j, i));
  d.sigma.push_back(sxi);
  for (std::size_t r = 1; r < d.codim(); ++r)
    d.sigma.push_back(equality ? equality_block(rng, n1, n2, scale)
                               : random_symmetric(rng, n, scale));
  return d;
}

PointwiseImmersionData dplus_leaf(const Ambient& ambient, std::size_t n1, std::size_t n2) {
  if (!ambient.contact) throw Error(ErrorKind::invalid_configuration, "a 𝒟₊ leaf needs a contact ambient");
  const ContactFrame& cf = *ambient.contact;
  if (n1 + n2 > cf.m) throw Error(ErrorKind::invalid_configuration, "a 𝒟₊ leaf has dimension <= m");
  PointwiseImmersionData d = shell(n1, n2, ambient);
  std::vector<Vec> seed;
  for (std::size_t i = 0; i < n1 + n2; ++i) seed.push_back(Vec::unit(ambient.dim, dplus_index(i)));
  seed.push_back(cf.xi);
  d.frame = frame_from(seed, ambient.dim);
  for (std::size_t r = 0; r < d.codim(); ++r) d.sigma.emplace_back(d.n(), d.n());
  return d;
}

void perturb_cross(PointwiseImmersionData& d, std::size_t r, std::size_t j, std::size_t t,
                   double eps) {
  if (r >= d.codim() || j >= d.n1 || t < d.n1 || t >= d.n())
    throw Error(ErrorKind::invalid_input, "perturb_cross needs j in block 1 and t in block 2");
  d.sigma[r](j, t) += eps;
  d.sigma[r](t, j) += eps;
}

// ------------------------------------------------------------ catalog

ChartImmersion immersion_catalog(const std::string& key) {
  const Descriptor d = parse_descriptor(key);
  ChartImmersion im;
  im.name = key;
  if (d.name == "sphere-in-euclidean") {
    const std::size_t n = descriptor_count(d, 0, 2);
    if (n < 2) throw Error(ErrorKind::validation, "sphere-in-euclidean(n) needs n >= 2");
    CatalogChart cc = warped_catalog("sphere(" + std::to_string(n) + ")");
    im.source_dim = n;
    im.ambient = charts::euclidean(n + 1);
    im.map = [](std::span<const double> u) { return charts::round_sphere_point(u); };
    im.n1 = 1;
    im.n2 = n - 1;
    im.lo = cc.lo;
    im.hi = cc.hi;
    im.warped = std::move(cc.chart);
  } else if (d.name == "plane" || d.name == "cylinder") {
    if (!d.args.empty()) throw Error(ErrorKind::validation, key + " takes no arguments");
    CatalogChart cc = warped_catalog("flat-product(1,1)");
    im.source_dim = 2;
    im.ambient = charts::euclidean(3);
    if (d.name == "plane") {
      im.map = [](std::span<const double> u) { return Vec{u[0], u[1], 0.0}; };
      im.lo = cc.lo;
      im.hi = cc.hi;
    } else {
      // (θ, t) ↦ (cos θ, sin θ, t): the circle is the first factor
      im.map = [](std::span<const double> u) { return Vec{std::cos(u[0]), std::sin(u[0]), u[1]}; };
      im.lo = Vec{-std::numbers::pi, -2.0};
      im.hi = Vec{std::numbers::pi, 2.0};
    }
    im.n1 = 1;
    im.n2 = 1;
    im.warped = std::move(cc.chart);
  } else {
    throw Error(ErrorKind::validation, "unknown chart immersion '" + key + "'");
  }
  return im;
}

NamedPointwise pointwise_catalog(const std::string& key) {
  const Descriptor d = parse_descriptor(key);
  if (d.name != "dplus-leaf" || d.args.size() != 3)
    throw Error(ErrorKind::validation, "unknown pointwise immersion '" + key + "'");
  const std::size_t m = descriptor_count(d, 0, 0);
  if (m < 2) throw Error(ErrorKind::validation, "dplus-leaf needs m >= 2");
  std::ostringstream amb;
  amb << std::setprecision(17);
  amb << "non-sasakian-kmu(" << m << "," << d.args[1] << "," << d.args[2] << ")";
  NamedPointwise out{make_ambient(amb.str()), {}};
  out.data = dplus_leaf(out.ambient, 1, m - 1);
  return out;
}

bool is_chart_immersion_key(const std::string& key) {
  const std::string name = parse_descriptor(key).name;
  return name == "sphere-in-euclidean" || name == "plane" || name == "cylinder";
}

std::vector<std::string> immersion_catalog_keys() {
  return {"sphere-in-euclidean(n)", "plane", "cylinder", "dplus-leaf(m,kappa,mu)"};
}

}  // namespace warpcheck
