#include "warpcheck/contact.hpp"

#include <cmath>
#include <sstream>

#include "warpcheck/descriptor.hpp"

namespace warpcheck {

double FrameResiduals::max() const {
  return std::max({phi_squared, eta_xi, phi_xi, eta_phi, metric_compatible, phi_skew, xi_dual,
                   h_symmetric, h_xi, h_phi_anticommute, trace_h, trace_phi_h, h_squared,
                   kappa_excess});
}

namespace {

Mat outer(const Vec& a, const Vec& b) {
  Mat m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

void require_shapes(const ContactFrame& f) {
  const std::size_t d = f.dim();
  if (f.phi.rows() != d || f.phi.cols() != d || f.h.rows() != d || f.h.cols() != d ||
      f.xi.size() != d || f.eta.size() != d)
    throw Error(ErrorKind::invalid_frame, "contact frame tensors do not match dimension 2m+1");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

FrameResiduals frame_residuals(const ContactFrame& f) {
  require_shapes(f);
  const std::size_t d = f.dim();
  const Mat I = Mat::identity(d);
  const Mat phi2 = f.phi * f.phi;
  FrameResiduals r;
  // η⊗ξ as an endomorphism is X ↦ η(X)ξ, i.e. the matrix ξηᵀ.
  r.phi_squared = max_abs(phi2 + I - outer(f.xi, f.eta));
  r.eta_xi = std::abs(dot(f.eta, f.xi) - 1.0);
  r.phi_xi = max_abs(f.phi * f.xi);
  r.eta_phi = max_abs(f.phi.transposed() * f.eta);
  r.metric_compatible = max_abs(f.phi.transposed() * f.phi + outer(f.eta, f.eta) - I);
  r.phi_skew = max_abs(f.phi + f.phi.transposed());
  r.xi_dual = max_abs(f.xi - f.eta);
  r.h_symmetric = max_abs(f.h - f.h.transposed());
  r.h_xi = max_abs(f.h * f.xi);
  r.h_phi_anticommute = max_abs(f.h * f.phi + f.phi * f.h);
  r.trace_h = std::abs(trace(f.h));
  r.trace_phi_h = std::abs(trace(f.phi * f.h));
  r.h_squared = max_abs(f.h * f.h - (f.kappa - 1.0) * phi2);
  r.kappa_excess = std::max(0.0, f.kappa - 1.0);
  return r;
}

void validate_frame(const ContactFrame& frame, double tol) {
  const FrameResiduals r = frame_residuals(frame);
  if (r.max() > tol)
    throw Error(ErrorKind::invalid_frame, "contact frame violates a structure identity (max residual " +
                                              fmt(r.max()) + ")");
}

ContactFrame make_kmu_frame(std::size_t m, double kappa, double mu) {
  if (m < 1) throw Error(ErrorKind::invalid_parameter, "contact frame needs m >= 1");
  if (!std::isfinite(kappa) || !std::isfinite(mu))
    throw Error(ErrorKind::invalid_parameter, "kappa and mu must be finite");
  if (kappa > 1.0) throw Error(ErrorKind::invalid_parameter, "kappa must satisfy kappa <= 1");
  ContactFrame f;
  f.m = m;
  f.kappa = kappa;
  f.mu = mu;
  const std::size_t d = f.dim();
  f.xi = Vec::unit(d, 0);
  f.eta = f.xi;
  f.phi = Mat(d, d);
  f.h = Mat(d, d);
  const double lambda = std::sqrt(1.0 - kappa);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t u = dplus_index(i);
    const std::size_t pu = dminus_index(m, i);
    f.phi(pu, u) = 1.0;   // φ u_i = φu_i
    f.phi(u, pu) = -1.0;  // φ(φu_i) = −u_i
    f.h(u, u) = lambda;
    f.h(pu, pu) = -lambda;
  }
  return f;
}

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kmu_space_form: return "kmu-space-form";
    case OracleKind::sasakian_space_form: return "sasakian-space-form";
    case OracleKind::non_sasakian_kmu: return "non-sasakian-kmu";
    case OracleKind::chart_numeric: return "chart-numeric";
    case OracleKind::real_space_form: return "real-space-form";
  }
  return "unknown";
}

double CurvatureOracle::sectional(const Vec& X, const Vec& Y) const {
  const double area2 = dot(X, X) * dot(Y, Y) - dot(X, Y) * dot(X, Y);
  if (!(area2 > 1e-24))
    throw Error(ErrorKind::degenerate_plane, "sectional curvature of a degenerate plane");
  return fn_(X, Y, Y, X) / area2;
}

CurvatureOracle real_space_form(std::size_t dim, double c) {
  auto fn = [c](const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) {
    return c * (dot(Y, Z) * dot(X, W) - dot(X, Z) * dot(Y, W));
  };
  return {OracleKind::real_space_form, dim, fn, "real-space-form(dim=" + std::to_string(dim) + ",c=" + fmt(c) + ")"};
}

namespace {

struct Structure {
  Mat phi;
  Mat h;
  Mat phi_h;
  Mat phi2;
  Vec xi;
  double kappa;
  double mu;
};

std::shared_ptr<const Structure> structure_of(const ContactFrame& f) {
  auto s = std::make_shared<Structure>();
  s->phi = f.phi;
  s->h = f.h;
  s->phi_h = f.phi * f.h;
  s->phi2 = f.phi * f.phi;
  s->xi = f.xi;
  s->kappa = f.kappa;
  s->mu = f.mu;
  return s;
}

}  // namespace

CurvatureOracle curvature_kmu_space_form(const ContactFrame& frame, double c) {
  validate_frame(frame);
  auto s = structure_of(frame);
  auto fn = [s, c](const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) {
    const double kappa = s->kappa;
    const double mu = s->mu;
    const Vec pX = s->phi * X, pY = s->phi * Y, pZ = s->phi * Z;
    const Vec hX = s->h * X, hY = s->h * Y;
    const Vec phX = s->phi_h * X, phY = s->phi_h * Y;
    const Vec p2X = s->phi2 * X, p2Y = s->phi2 * Y;
    const double eX = dot(s->xi, X), eY = dot(s->xi, Y), eZ = dot(s->xi, Z), eW = dot(s->xi, W);
    const double YZ = dot(Y, Z), XW = dot(X, W), XZ = dot(X, Z), YW = dot(Y, W);

    double r = (c + 3.0) / 4.0 * (YZ * XW - XZ * YW);
    r += (c - 1.0) / 4.0 *
         (2.0 * dot(X, pY) * dot(pZ, W) + dot(X, pZ) * dot(pY, W) - dot(Y, pZ) * dot(pX, W));
    r += (c + 3.0 - 4.0 * kappa) / 4.0 * (eX * eZ * YW - eY * eZ * XW + XZ * eY * eW - YZ * eX * eW);
    r += 0.5 * (dot(hY, Z) * dot(hX, W) - dot(hX, Z) * dot(hY, W) + dot(phX, Z) * dot(phY, W) -
                dot(phY, Z) * dot(phX, W));
    r += dot(pY, pZ) * dot(hX, W) - dot(pX, pZ) * dot(hY, W);
    r += dot(hX, Z) * dot(p2Y, W) - dot(hY, Z) * dot(p2X, W);
    r += mu * (eY * eZ * dot(hX, W) - eX * eZ * dot(hY, W) + dot(hY, Z) * eX * eW - dot(hX, Z) * eY * eW);
    return r;
  };
  return {OracleKind::kmu_space_form, frame.dim(), fn,
          "kmu-space-form(m=" + std::to_string(frame.m) + ",kappa=" + fmt(frame.kappa) +
              ",mu=" + fmt(frame.mu) + ",c=" + fmt(c) + ")"};
}

CurvatureOracle curvature_sasakian_space_form(const ContactFrame& frame, double c) {
  validate_frame(frame);
  if (!frame.sasakian()) throw Error(ErrorKind::invalid_frame, "Sasakian space form requires h = 0");
  auto s = structure_of(frame);
  auto fn = [s, c](const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) {
    const Vec pX = s->phi * X, pY = s->phi * Y, pZ = s->phi * Z;
    const double eX = dot(s->xi, X), eY = dot(s->xi, Y), eZ = dot(s->xi, Z), eW = dot(s->xi, W);
    const double YZ = dot(Y, Z), XW = dot(X, W), XZ = dot(X, Z), YW = dot(Y, W);
    return (c + 3.0) / 4.0 * (YZ * XW - XZ * YW) +
           (c - 1.0) / 4.0 *
               (2.0 * dot(X, pY) * dot(pZ, W) + dot(X, pZ) * dot(pY, W) - dot(Y, pZ) * dot(pX, W) +
                eX * eZ * YW - eY * eZ * XW + XZ * eY * eW - YZ * eX * eW);
  };
  return {OracleKind::sasakian_space_form, frame.dim(), fn,
          "sasakian-space-form(m=" + std::to_string(frame.m) + ",c=" + fmt(c) + ")"};
}

CurvatureOracle curvature_non_sasakian(const ContactFrame& frame) {
  if (frame.kappa > 1.0 - 1e-8)
    throw Error(ErrorKind::singular_parameter, "non-Sasakian curvature needs kappa < 1");
  validate_frame(frame);
  auto s = structure_of(frame);
  auto fn = [s](const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) {
    const double kappa = s->kappa;
    const double mu = s->mu;
    const double a = 1.0 - mu / 2.0;
    const double q = kappa - 1.0 + mu / 2.0;
    const Vec pX = s->phi * X, pY = s->phi * Y, pZ = s->phi * Z;
    const Vec hX = s->h * X, hY = s->h * Y;
    const Vec phX = s->phi_h * X, phY = s->phi_h * Y;
    const double eX = dot(s->xi, X), eY = dot(s->xi, Y), eZ = dot(s->xi, Z), eW = dot(s->xi, W);
    const double YZ = dot(Y, Z), XW = dot(X, W), XZ = dot(X, Z), YW = dot(Y, W);
    const double hYZ = dot(hY, Z), hXW = dot(hX, W), hXZ = dot(hX, Z), hYW = dot(hY, W);

    double r = a * (YZ * XW - XZ * YW);
    r -= mu / 2.0 * (2.0 * dot(X, pY) * dot(pZ, W) + dot(X, pZ) * dot(pY, W) - dot(Y, pZ) * dot(pX, W));
    r += YZ * hXW - XZ * hYW - YW * hXZ + XW * hYZ;
    r += a / (1.0 - kappa) * (hYZ * hXW - hXZ * hYW);
    r += (kappa - mu / 2.0) / (1.0 - kappa) * (dot(phY, Z) * dot(phX, W) - dot(phX, Z) * dot(phY, W));
    r += eX * eW * (q * YZ + (mu - 1.0) * hYZ);
    r -= eX * eZ * (q * YW + (mu - 1.0) * hYW);
    r += eY * eZ * (q * XW + (mu - 1.0) * hXW);
    r -= eY * eW * (q * XZ + (mu - 1.0) * hXZ);
    return r;
  };
  return {OracleKind::non_sasakian_kmu, frame.dim(), fn,
          "non-sasakian-kmu(m=" + std::to_string(frame.m) + ",kappa=" + fmt(frame.kappa) +
              ",mu=" + fmt(frame.mu) + ")"};
}

double check_km_condition(const CurvatureOracle& oracle, const ContactFrame& frame) {
  const std::size_t d = frame.dim();
  const Mat K = frame.kappa * Mat::identity(d) + frame.mu * frame.h;
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const Vec X = Vec::unit(d, a);
      const Vec Y = Vec::unit(d, b);
      const Vec expected = K * (dot(frame.eta, Y) * X - dot(frame.eta, X) * Y);
      // raise the last slot: the frame is orthonormal
      Vec got(d);
      for (std::size_t l = 0; l < d; ++l) got[l] = oracle(X, Y, frame.xi, Vec::unit(d, l));
      worst = std::max(worst, norm(got - expected));
    }
  return worst;
}

double phi_sectional(const CurvatureOracle& oracle, const ContactFrame& frame, const Vec& X,
                     double tol) {
  if (std::abs(norm(X) - 1.0) > tol)
    throw Error(ErrorKind::invalid_input, "phi_sectional needs a unit vector");
  if (std::abs(dot(frame.eta, X)) > tol)
    throw Error(ErrorKind::invalid_input, "phi_sectional needs X orthogonal to xi");
  const Vec pX = frame.phi * X;
  return oracle(X, pX, pX, X);
}

SymmetryResiduals oracle_symmetries(const CurvatureOracle& oracle, Rng& rng, std::size_t samples) {
  SymmetryResiduals r;
  const std::size_t d = oracle.dim();
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec X = random_gaussian(rng, d), Y = random_gaussian(rng, d);
    const Vec Z = random_gaussian(rng, d), W = random_gaussian(rng, d);
    const double base = oracle(X, Y, Z, W);
    r.antisym_first = std::max(r.antisym_first, std::abs(base + oracle(Y, X, Z, W)));
    r.antisym_second = std::max(r.antisym_second, std::abs(base + oracle(X, Y, W, Z)));
    r.pair = std::max(r.pair, std::abs(base - oracle(Z, W, X, Y)));
    r.bianchi = std::max(r.bianchi, std::abs(base + oracle(Y, Z, X, W) + oracle(Z, X, Y, W)));
  }
  return r;
}

KmuParameters tangent_sphere_bundle_parameters(double c) { return {c * (2.0 - c), -2.0 * c}; }

Ambient make_ambient(const std::string& key, std::optional<std::size_t> dim_hint) {
  const Descriptor d = parse_descriptor(key);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (d.args.size() < lo || d.args.size() > hi)
      throw Error(ErrorKind::validation, "wrong number of arguments in ambient '" + key + "'");
  };
  Ambient a;
  a.key = key;
  if (d.name == "euclidean") {
    need(1, 1);
    a.dim = descriptor_count(d, 0, 0);
    if (a.dim < 1) throw Error(ErrorKind::validation, "euclidean(m) needs m >= 1");
    a.oracle = real_space_form(a.dim, 0.0);
    a.c = 0.0;
  } else if (d.name == "real-space-form") {
    need(1, 2);
    if (d.args.size() == 2) {
      a.dim = descriptor_count(d, 0, 0);
      a.c = d.args[1];
    } else {
      if (!dim_hint) throw Error(ErrorKind::validation, "real-space-form(c) needs a dimension from the source");
      a.dim = *dim_hint;
      a.c = d.args[0];
    }
    if (a.dim < 1) throw Error(ErrorKind::validation, "real-space-form dimension must be >= 1");
    a.oracle = real_space_form(a.dim, *a.c);
  } else if (d.name == "sasakian-space-form") {
    need(2, 2);
    ContactFrame f = make_kmu_frame(descriptor_count(d, 0, 1), 1.0, 0.0);
    f.c = d.args[1];
    a.oracle = curvature_sasakian_space_form(f, *f.c);
    a.c = f.c;
    a.contact = f;
  } else if (d.name == "kmu-space-form") {
    need(4, 4);
    ContactFrame f = make_kmu_frame(descriptor_count(d, 0, 1), d.args[1], d.args[2]);
    f.c = d.args[3];
    a.oracle = curvature_kmu_space_form(f, *f.c);
    a.c = f.c;
    a.contact = f;
  } else if (d.name == "non-sasakian-kmu") {
    need(3, 3);
    ContactFrame f = make_kmu_frame(descriptor_count(d, 0, 1), d.args[1], d.args[2]);
    a.oracle = curvature_non_sasakian(f);
    a.contact = f;
  } else if (d.name == "tangent-sphere-bundle" || d.name == "tangent-sphere-bundle-example") {
    need(1, 2);
    const double c = d.args[0];
    KmuParameters p = tangent_sphere_bundle_parameters(c);
    if (d.name == "tangent-sphere-bundle-example") {
      p.mu = 2.0 * c;
      a.notes.push_back("tangent-sphere-bundle-example uses mu = +2c; this conflicts with the "
                        "mu = -2c parameter map of tangent-sphere-bundle(c)");
    }
    if (p.kappa > 1.0 - 1e-8)
      throw Error(ErrorKind::singular_parameter, "tangent sphere bundle with c = 1 is Sasakian");
    ContactFrame f = make_kmu_frame(descriptor_count(d, 1, 3), p.kappa, p.mu);
    a.oracle = curvature_non_sasakian(f);
    a.contact = f;
    a.notes.push_back("tangent sphere bundle of constant curvature " + fmt(c) + ": kappa = " +
                      fmt(p.kappa) + ", mu = " + fmt(p.mu));
  } else {
    throw Error(ErrorKind::validation, "unknown ambient '" + key + "'");
  }
  if (a.contact) a.dim = a.contact->dim();
  return a;
}

std::vector<std::string> ambient_catalog_keys() {
  return {"euclidean(m)",
          "real-space-form(c)",
          "real-space-form(dim,c)",
          "sasakian-space-form(m,c)",
          "kmu-space-form(m,kappa,mu,c)",
          "non-sasakian-kmu(m,kappa,mu)",
          "tangent-sphere-bundle(c[,m])",
          "tangent-sphere-bundle-example(c[,m])"};
}

}  // namespace warpcheck
