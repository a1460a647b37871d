#include "warpcheck/chen.hpp"

#include <cmath>
#include <numeric>

namespace warpcheck {

// ------------------------------------------------------------ lemma

double admissible_b(std::span<const double> a) {
  if (a.size() < 2) throw Error(ErrorKind::invalid_input, "the lemma needs at least two numbers");
  const double s = std::accumulate(a.begin(), a.end(), 0.0);
  double q = 0.0;
  for (double x : a) q += x * x;
  return s * s / static_cast<double>(a.size() - 1) - q;
}

LemmaResult chen_lemma(std::span<const double> a, double b, double tol) {
  const std::size_t l = a.size();
  if (l < 2) throw Error(ErrorKind::invalid_input, "the lemma needs at least two numbers");
  const double s = std::accumulate(a.begin(), a.end(), 0.0);
  double q = 0.0, amax = 0.0;
  for (double x : a) {
    q += x * x;
    amax = std::max(amax, std::abs(x));
  }
  const double lm1 = static_cast<double>(l - 1);
  const double scale = std::max({1.0, s * s, lm1 * (q + std::abs(b))});

  LemmaResult r;
  r.constraint_residual = s * s - lm1 * (q + b);
  if (std::abs(r.constraint_residual) > tol * scale)
    throw Error(ErrorKind::inadmissible_tuple, "(sum a)^2 != (l-1)(sum a^2 + b)");
  r.margin = 2.0 * a[0] * a[1] - b;
  r.holds = r.margin >= -tol * scale;
  for (std::size_t i = 2; i < l; ++i)
    r.tail_residual = std::max(r.tail_residual, std::abs(a[i] - (a[0] + a[1])));
  r.equality = r.tail_residual <= tol * std::max(1.0, amax);
  return r;
}

// ------------------------------------------------------------ proof chain

namespace {

struct BlockScalars {
  double all = 0.0;
  double block1 = 0.0;
  double block2 = 0.0;
  double mixed() const { return all - block1 - block2; }
};

template <class K>
BlockScalars block_scalars(const PointwiseImmersionData& d, K&& sectional) {
  BlockScalars s;
  for (std::size_t i = 0; i < d.n(); ++i)
    for (std::size_t j = i + 1; j < d.n(); ++j) {
      const double k = sectional(i, j);
      s.all += k;
      if (j < d.n1) s.block1 += k;
      if (i >= d.n1) s.block2 += k;
    }
  return s;
}

BlockScalars ambient_scalars(const PointwiseImmersionData& d) {
  return block_scalars(d, [&](std::size_t i, std::size_t j) {
    return d.oracle.sectional(d.tangent(i), d.tangent(j));
  });
}

BlockScalars gauss_scalars(const PointwiseImmersionData& d) {
  return block_scalars(d, [&](std::size_t i, std::size_t j) { return gauss_sectional(d, i, j); });
}

}  // namespace

double ambient_mixed_scalar(const PointwiseImmersionData& d) { return ambient_scalars(d).mixed(); }
double gauss_mixed_scalar(const PointwiseImmersionData& d) { return gauss_scalars(d).mixed(); }

ProofDecomposition decompose(const PointwiseImmersionData& d, double h_tol) {
  validate(d, 1e-8);
  const std::size_t n = d.n();
  const std::size_t q = d.codim();
  const MeanCurvatureRecord mc = mean_curvatures(d);

  ProofDecomposition p;
  std::vector<Mat> s = d.sigma;
  if (mc.norm_H > h_tol) {
    p.h_defined_direction = true;
    std::vector<Vec> seed{(1.0 / mc.norm_H) * mc.H};
    std::vector<Vec> candidates;
    for (std::size_t k = 0; k < q; ++k) candidates.push_back(Vec::unit(q, k));
    const std::vector<Vec> basis = complete_orthonormal(seed, candidates, q, euclidean_inner());
    for (std::size_t r = 0; r < q; ++r) {
      Mat m(n, n);
      for (std::size_t k = 0; k < q; ++k) m += basis[r][k] * d.sigma[k];
      s[r] = std::move(m);
    }
  }

  const BlockScalars tau = gauss_scalars(d);
  const BlockScalars tau_amb = ambient_scalars(d);
  p.tau = tau.all;
  p.tau_ambient = tau_amb.all;
  p.norm_H2 = mc.norm_H * mc.norm_H;
  p.sigma_norm2 = sigma_norm2(d);
  const double nn = static_cast<double>(n * n);
  p.delta = 0.5 * (4.0 * p.tau - 4.0 * p.tau_ambient - nn * p.norm_H2);
  p.h_delta_sigma_residual = nn * p.norm_H2 - 2.0 * (p.delta + p.sigma_norm2);

  const Mat& s0 = s[0];
  p.a1 = s0(0, 0);
  for (std::size_t i = 1; i < d.n1; ++i) p.a2 += s0(i, i);
  for (std::size_t t = d.n1; t < n; ++t) p.a3 += s0(t, t);

  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) off += s0(i, j) * s0(i, j);
  double rest = 0.0;
  for (std::size_t r = 1; r < q; ++r)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rest += s[r](i, j) * s[r](i, j);
  double cross1 = 0.0, cross2 = 0.0;
  for (std::size_t j = 1; j < d.n1; ++j)
    for (std::size_t k = 1; k < d.n1; ++k)
      if (j != k) cross1 += s0(j, j) * s0(k, k);
  for (std::size_t a = d.n1; a < n; ++a)
    for (std::size_t b = d.n1; b < n; ++b)
      if (a != b) cross2 += s0(a, a) * s0(b, b);
  p.b = p.delta + off + rest - cross1 - cross2;

  const double sum = p.a1 + p.a2 + p.a3;
  p.a_i_residual = sum * sum - 2.0 * (p.a1 * p.a1 + p.a2 * p.a2 + p.a3 * p.a3 + p.b);
  p.lemma_margin = 2.0 * p.a1 * p.a2 - p.b;
  p.trace_balance = p.a1 + p.a2 - p.a3;

  for (std::size_t j = 0; j < d.n1; ++j)
    for (std::size_t k = j + 1; k < d.n1; ++k) p.ab_lhs += s0(j, j) * s0(k, k);
  for (std::size_t a = d.n1; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) p.ab_lhs += s0(a, a) * s0(b, b);
  p.ab_rhs = 0.5 * p.delta + 0.5 * off + 0.5 * rest;

  for (std::size_t r = 0; r < q; ++r) {
    double t1 = 0.0, t2 = 0.0;
    for (std::size_t i = 0; i < d.n1; ++i) t1 += s[r](i, i);
    for (std::size_t t = d.n1; t < n; ++t) t2 += s[r](t, t);
    p.trace1.push_back(t1);
    p.trace2.push_back(t2);
  }
  return p;
}

// ------------------------------------------------------------ reports

double InequalityReport::value(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw Error(ErrorKind::invalid_input, "report has no value '" + key + "'");
  return it->second;
}

namespace {

void finish(InequalityReport& r, const InequalityOptions& opts) {
  r.gap = r.rhs - r.lhs;
  r.equality = std::abs(r.gap) < opts.equality_tol;
  r.holds = r.gap >= -opts.violation_tol;
  r.values["lhs"] = r.lhs;
  r.values["rhs"] = r.rhs;
  r.values["gap"] = r.gap;
}

void require_c_totally_real(const PointwiseImmersionData& d) {
  if (!d.contact) throw Error(ErrorKind::invalid_configuration, "no contact structure attached");
  const CTotallyRealReport ctr = is_C_totally_real(d, 1e-8);
  if (!ctr.value) throw Error(ErrorKind::invalid_configuration, "immersion is not C-totally real");
}

double bracket(const BlockQuantities& q) {
  return (q.trace * q.trace - q.trace1 * q.trace1 - q.trace2 * q.trace2) -
         (q.norm2 - q.norm2_1 - q.norm2_2);
}

// Replaces the right-hand side by a closed form and records the comparison.
void specialize(InequalityReport& r, double closed_ambient_term, const AXiReport& ax,
                const InequalityOptions& opts) {
  const double general = r.rhs;
  r.rhs = r.values["mean_term"] + closed_ambient_term;
  r.values["rhs_general"] = general;
  r.values["specialization_residual"] = std::abs(r.rhs - general);
  r.values["ambient_term_closed_form"] = closed_ambient_term;
  r.values["a_xi_residual"] = ax.residual;
  r.values["trace_h_1"] = ax.h.trace1;
  r.values["trace_h_2"] = ax.h.trace2;
  r.values["trace_a_xi_1"] = ax.a.trace1;
  r.values["trace_a_xi_2"] = ax.a.trace2;
  r.values["norm2_h"] = ax.h.norm2;
  r.values["norm2_a_xi"] = ax.a.norm2;
  finish(r, opts);
}

}  // namespace

InequalityReport general_inequality(const PointwiseImmersionData& d, LhsSource lhs,
                                    const InequalityOptions& opts) {
  validate(d, 1e-8);
  const double n1 = static_cast<double>(d.n1);
  const double n2 = static_cast<double>(d.n2);
  const double n = n1 + n2;

  const MeanCurvatureRecord mc = mean_curvatures(d);
  const BlockScalars amb = ambient_scalars(d);
  const BlockScalars tau = gauss_scalars(d);
  const double H2 = mc.norm_H * mc.norm_H;

  InequalityReport r;
  r.name = "general_inequality";
  const double mean_term = n * n / (4.0 * n2) * H2;
  const double ambient_term = (amb.all - amb.block1 - amb.block2) / n2;
  r.rhs = mean_term + ambient_term;
  const double proxy = tau.mixed() / n2;
  if (lhs.kind == LhsKind::chart) {
    r.lhs_source = "chart";
    r.lhs = lhs.chart_value;
    r.values["lhs_chart"] = lhs.chart_value;
    r.values["lhs_agreement"] = std::abs(lhs.chart_value - proxy);
  } else {
    r.lhs_source = "tau_proxy";
    r.lhs = proxy;
  }
  r.values["lhs_tau_proxy"] = proxy;

  r.diagnostics.mixed_residual = mixed_residual(d);
  r.diagnostics.mixed_totally_geodesic = r.diagnostics.mixed_residual < opts.diagnostic_tol;
  double worst = 0.0;
  for (std::size_t k = 0; k < d.codim(); ++k) {
    const double c = std::abs(n1 * mc.H1[k] - n2 * mc.H2[k]);
    r.diagnostics.trace_conditions.push_back(c);
    worst = std::max(worst, c);
  }
  r.diagnostics.partial_mean_equal = worst < opts.diagnostic_tol;

  r.values["n1"] = n1;
  r.values["n2"] = n2;
  r.values["norm_H"] = mc.norm_H;
  r.values["norm_H1"] = mc.norm_H1;
  r.values["norm_H2"] = mc.norm_H2;
  r.values["mean_term"] = mean_term;
  r.values["ambient_term"] = ambient_term;
  r.values["tau_ambient"] = amb.all;
  r.values["tau_ambient_1"] = amb.block1;
  r.values["tau_ambient_2"] = amb.block2;
  r.values["tau"] = tau.all;
  r.values["tau_1"] = tau.block1;
  r.values["tau_2"] = tau.block2;
  r.values["mixed_residual"] = r.diagnostics.mixed_residual;
  r.values["max_trace_condition"] = worst;
  finish(r, opts);
  return r;
}

InequalityReport kmu_space_form_inequality(const PointwiseImmersionData& d, double c,
                                           LhsSource lhs, const InequalityOptions& opts) {
  require_c_totally_real(d);
  const ContactFrame& cf = *d.contact;
  PointwiseImmersionData model = d;
  model.oracle = curvature_kmu_space_form(cf, c);
  InequalityReport r = general_inequality(model, lhs, opts);
  r.name = "kmu_space_form_inequality";

  const AXiReport ax = a_xi_identity(d);
  const double n1 = static_cast<double>(d.n1);
  const double n2 = static_cast<double>(d.n2);
  const double closed = n1 * (c + 3.0) / 4.0 + ax.h.trace1 + n1 / n2 * ax.h.trace2 +
                        (bracket(ax.h) - bracket(ax.a)) / (4.0 * n2);
  r.values["c"] = c;
  specialize(r, closed, ax, opts);
  if (cf.sasakian()) {
    r.values["sasakian_collapse_residual"] =
        std::abs(r.rhs - (r.values["mean_term"] + n1 * (c + 3.0) / 4.0));
  }
  return r;
}

InequalityReport non_sasakian_inequality(const PointwiseImmersionData& d, LhsSource lhs,
                                         const InequalityOptions& opts) {
  if (!d.contact) throw Error(ErrorKind::invalid_configuration, "no contact structure attached");
  const ContactFrame& cf = *d.contact;
  if (cf.kappa > 1.0 - 1e-8)
    throw Error(ErrorKind::singular_parameter, "non-Sasakian inequality needs kappa < 1");
  require_c_totally_real(d);
  PointwiseImmersionData model = d;
  model.oracle = curvature_non_sasakian(cf);
  InequalityReport r = general_inequality(model, lhs, opts);
  r.name = "non_sasakian_inequality";

  const AXiReport ax = a_xi_identity(d);
  const double n1 = static_cast<double>(d.n1);
  const double n2 = static_cast<double>(d.n2);
  const double p = (1.0 - cf.mu / 2.0) / (1.0 - cf.kappa);
  const double q = (cf.kappa - cf.mu / 2.0) / (1.0 - cf.kappa);
  const double base = n1 * (1.0 - cf.mu / 2.0) + ax.h.trace1 + n1 / n2 * ax.h.trace2 +
                      p / (2.0 * n2) * bracket(ax.h);
  const double a_term = q / (2.0 * n2) * bracket(ax.a);
  r.values["kappa"] = cf.kappa;
  r.values["mu"] = cf.mu;
  specialize(r, base + a_term, ax, opts);
  r.values["rhs_opposite_sign"] = r.values["mean_term"] + base - a_term;
  return r;
}

// ------------------------------------------------------------ obstructions

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::nonexistence: return "NONEXISTENCE";
    case Verdict::warped_product_immersion: return "WARPED_PRODUCT_IMMERSION";
    case Verdict::unobstructed: return "UNOBSTRUCTED";
  }
  return "UNOBSTRUCTED";
}

ObstructionResult obstruction_check(const InequalityReport& report, const ObstructionFlags& flags) {
  if (flags.harmonic && flags.eigenvalue)
    throw Error(ErrorKind::invalid_configuration, "harmonic and eigenfunction flags are exclusive");
  if (!flags.harmonic && !flags.eigenvalue)
    throw Error(ErrorKind::invalid_configuration, "obstruction check needs harmonic or eigenvalue");
  const double norm_H = report.value("norm_H");
  if (flags.minimal && norm_H > flags.tol)
    throw Error(ErrorKind::invalid_configuration, "minimal flag set but H != 0");

  ObstructionResult out;
  out.implied_lhs = flags.harmonic ? 0.0 : *flags.eigenvalue;
  if (report.lhs_source == "chart" && std::abs(report.lhs - out.implied_lhs) > flags.tol)
    throw Error(ErrorKind::invalid_configuration,
                "warping function flag disagrees with the chart Laplacian");
  out.rhs_curvature = report.rhs - report.value("mean_term");
  if (!flags.minimal) {
    out.reason = "not minimal: the mean curvature term is unconstrained";
    return out;
  }
  if (out.implied_lhs > out.rhs_curvature + flags.tol) {
    out.verdict = Verdict::nonexistence;
    out.reason = "Delta f / f exceeds the curvature bound";
  } else if (std::abs(out.implied_lhs - out.rhs_curvature) <= flags.tol) {
    out.verdict = Verdict::warped_product_immersion;
    out.reason = "equality: the immersion is a warped product immersion";
  } else {
    out.reason = "bound is strict";
  }
  return out;
}

}  // namespace warpcheck
