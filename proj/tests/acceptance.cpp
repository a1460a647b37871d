// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "warpcheck/chen.hpp"
#include "warpcheck/scene.hpp"

using namespace warpcheck;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// AC1: S² = (−π/2, π/2) ×_{cos t} S¹ ⊂ R³ through the chart pipeline.
Outcome sphere_equality() {
  const auto t0 = Clock::now();
  const ChartImmersion im = immersion_catalog("sphere-in-euclidean(2)");
  Rng rng = derive_rng(1, 0);
  const InequalityOptions opts{1e-3, 1e-3, 1e-9};
  double worst_gap = 0.0, worst_lhs = 0.0, worst_mean = 0.0;
  bool diagnostics = true;
  for (int i = 0; i < 50; ++i) {
    const Vec p = random_in_box(rng, im.lo, im.hi);
    const PointwiseImmersionData d = second_fundamental_form(im, p.span());
    const InequalityReport r = general_inequality(d, LhsSource::chart(chart_laplacian_ratio(im, p.span())), opts);
    worst_gap = std::max(worst_gap, std::abs(r.gap));
    worst_lhs = std::max(worst_lhs, std::abs(r.lhs - 1.0));
    worst_mean = std::max(worst_mean, std::abs(r.value("mean_term") - 1.0));
    diagnostics = diagnostics && r.equality && r.diagnostics.mixed_totally_geodesic && r.diagnostics.partial_mean_equal;
  }
  const double secs = seconds_since(t0);
  return {worst_gap < 1e-3 && worst_lhs < 1e-3 && worst_mean < 1e-3 && diagnostics && secs < 5.0,
          fmt("50 points: max|gap| %.2e, max|lhs-1| %.2e, max|mean-1| %.2e, diagnostics %s, %.2f s", worst_gap,
              worst_lhs, worst_mean, diagnostics ? "true" : "false", secs)};
}

// AC2: 10^4 random data per ambient family, mixing generic, equality and
// near-equality σ over varied (n1, n2, N).
Outcome randomized_inequality() {
  const auto t0 = Clock::now();
  struct Family {
    const char* name;
    std::function<std::string(Rng&)> key;
  };
  const std::vector<Family> families{
      {"euclidean", [](Rng& r) { return "euclidean(" + std::to_string(random_index(r, 3, 9)) + ")"; }},
      {"kmu-space-form",
       [](Rng& r) {
         const double kappa = random_uniform(r, -2.0, 0.9);
         return fmt("kmu-space-form(%zu,%.6f,%.6f,%.6f)", random_index(r, 1, 4), kappa, random_uniform(r, -2.0, 3.0),
                    random_uniform(r, -5.0, 3.0));
       }},
      {"sasakian-space-form",
       [](Rng& r) { return fmt("sasakian-space-form(%zu,%.6f)", random_index(r, 1, 4), random_uniform(r, -6.0, 4.0)); }},
      {"non-sasakian",
       [](Rng& r) {
         return fmt("non-sasakian-kmu(%zu,%.6f,%.6f)", random_index(r, 1, 4), random_uniform(r, -2.0, 0.95),
                    random_uniform(r, -2.0, 3.0));
       }},
  };
  const std::size_t per_family = 10000;
  std::size_t violations = 0, total = 0;
  std::string summary;
  for (std::size_t f = 0; f < families.size(); ++f) {
    double min_gap = 1e300;
    for (std::size_t k = 0; k < per_family; ++k) {
      Rng rng = derive_rng(2000 + f, k);
      const Ambient a = make_ambient(families[f].key(rng));
      const std::size_t n = random_index(rng, 2, a.dim - 1);
      const std::size_t n1 = random_index(rng, 1, n - 1);
      const double scale = std::exp(random_uniform(rng, std::log(0.05), std::log(3.0)));
      PointwiseImmersionData d;
      switch (k % 3) {
        case 0: d = random_immersion_data(rng, n1, n - n1, a, scale); break;
        case 1: d = equality_immersion_data(rng, n1, n - n1, a, scale); break;
        default:
          d = equality_immersion_data(rng, n1, n - n1, a, scale);
          perturb_cross(d, random_index(rng, 0, d.codim() - 1), random_index(rng, 0, n1 - 1),
                        random_index(rng, n1, n - 1), 1e-6 * scale);
      }
      const InequalityReport r = general_inequality(d);
      min_gap = std::min(min_gap, r.gap);
      violations += r.gap < -1e-9 ? 1 : 0;
      ++total;
    }
    summary += fmt("%s min gap %.2e; ", families[f].name, min_gap);
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 60.0,
          fmt("%zu samples, %zu violations, %.1f s; ", total, violations, secs) + summary};
}

// AC3: equality-constructed σ versus a single cross-block perturbation of 1e-2.
Outcome equality_characterization() {
  std::size_t misclassified = 0;
  double worst_eq = 0.0, min_perturbed = 1e300;
  const char* keys[] = {"euclidean(7)", "kmu-space-form(3,0.5,1.5,-2)", "sasakian-space-form(3,-1)",
                        "non-sasakian-kmu(3,0.2,1.7)"};
  for (std::size_t k = 0; k < 1000; ++k) {
    Rng rng = derive_rng(3000, k);
    const Ambient a = make_ambient(keys[k % 4]);
    const std::size_t n = random_index(rng, 2, a.dim - 1);
    const std::size_t n1 = random_index(rng, 1, n - 1);
    PointwiseImmersionData d = equality_immersion_data(rng, n1, n - n1, a);
    const InequalityReport e = general_inequality(d);
    worst_eq = std::max(worst_eq, std::abs(e.gap));
    if (!(std::abs(e.gap) < 1e-8 && e.equality && e.diagnostics.mixed_totally_geodesic &&
          e.diagnostics.partial_mean_equal))
      ++misclassified;
    perturb_cross(d, random_index(rng, 0, d.codim() - 1), random_index(rng, 0, n1 - 1), random_index(rng, n1, n - 1),
                  1e-2);
    const InequalityReport p = general_inequality(d);
    min_perturbed = std::min(min_perturbed, p.gap);
    if (!(p.gap >= 1e-5 && !p.equality && !p.diagnostics.mixed_totally_geodesic)) ++misclassified;
  }
  return {misclassified == 0,
          fmt("1000+1000 samples: max equality |gap| %.2e, min perturbed gap %.2e, %zu misclassified", worst_eq,
              min_perturbed, misclassified)};
}

// AC4: admissible tuples, half of them built on the equality locus.
Outcome lemma() {
  std::size_t wrong = 0, equality_cases = 0;
  double min_margin = 1e300;
  for (std::size_t k = 0; k < 10000; ++k) {
    Rng rng = derive_rng(4000, k);
    const std::size_t l = random_index(rng, 2, 10);
    Vec a = random_gaussian(rng, l);
    const bool build_equality = k % 2 == 0;
    if (build_equality)
      for (std::size_t i = 2; i < l; ++i) a[i] = a[0] + a[1];
    const bool truth = build_equality || l == 2;
    const LemmaResult r = chen_lemma(a.span(), admissible_b(a.span()), 1e-10);
    min_margin = std::min(min_margin, r.margin);
    equality_cases += r.equality ? 1 : 0;
    if (!r.holds || r.equality != truth) ++wrong;
  }
  return {wrong == 0, fmt("10000 tuples: min margin %.2e, %zu equality cases, %zu wrong", min_margin, equality_cases, wrong)};
}

// AC5: nullity condition and tensor symmetries over a (κ, μ) grid; κ = 1
// reduces the (κ, μ) model to the Sasakian formula.
Outcome curvature_models() {
  double km = 0.0, sym = 0.0, sas = 0.0;
  std::size_t models = 0;
  Rng rng = derive_rng(5000, 0);
  for (std::size_t m : {1u, 2u, 3u})
    for (double kappa : {-3.0, -1.0, 0.0, 0.36, 0.75, 0.99})
      for (double mu : {-2.0, 0.0, 1.0, 2.5}) {
        const ContactFrame cf = make_kmu_frame(m, kappa, mu);
        for (const CurvatureOracle& o : {curvature_kmu_space_form(cf, -2.0 * kappa - 1.0), curvature_kmu_space_form(cf, 1.5),
                                         curvature_non_sasakian(cf)}) {
          km = std::max(km, check_km_condition(o, cf));
          sym = std::max(sym, oracle_symmetries(o, rng, 1000).max());
          ++models;
        }
      }
  for (std::size_t m : {1u, 2u, 3u})
    for (double c : {-5.0, -1.0, 0.0, 1.0, 4.0}) {
      const ContactFrame cf = make_kmu_frame(m, 1.0, 0.0);
      const CurvatureOracle kmu = curvature_kmu_space_form(cf, c);
      const CurvatureOracle ref = curvature_sasakian_space_form(cf, c);
      for (int i = 0; i < 200; ++i) {
        const std::size_t N = cf.dim();
        const Vec X = random_gaussian(rng, N), Y = random_gaussian(rng, N), Z = random_gaussian(rng, N),
                  W = random_gaussian(rng, N);
        sas = std::max(sas, std::abs(kmu(X, Y, Z, W) - ref(X, Y, Z, W)));
      }
    }
  return {km < 1e-10 && sym < 1e-10 && sas < 1e-12,
          fmt("%zu models: km residual %.2e, symmetry/Bianchi %.2e, Sasakian reduction %.2e", models, km, sym, sas)};
}

// AC6: φ-sectional curvature over random unit X ⊥ ξ.
Outcome phi_sectional_constancy() {
  Rng rng = derive_rng(6000, 0);
  auto spread = [&](const CurvatureOracle& o, const ContactFrame& cf, double expected, double& dev) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 100; ++i) {
      Vec X = random_gaussian(rng, cf.dim());
      X -= dot(cf.xi, X) * cf.xi;
      X *= 1.0 / norm(X);
      const double k = phi_sectional(o, cf, X);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
      dev = std::max(dev, std::abs(k - expected));
    }
    return hi - lo;
  };
  double kmu_spread = 0.0, kmu_dev = 0.0, ns_spread = 0.0, ns_dev = 0.0;
  for (std::size_t m : {2u, 3u})
    for (double kappa : {-1.0, 0.0, 0.5, 1.0})
      for (double c : {-3.0, 0.5, 2.0}) {
        const ContactFrame cf = make_kmu_frame(m, kappa, kappa + 1.0);
        kmu_spread = std::max(kmu_spread, spread(curvature_kmu_space_form(cf, c), cf, c, kmu_dev));
      }
  for (std::size_t m : {2u, 3u})
    for (double kappa : {-2.0, -0.5, 0.0, 0.3, 0.8}) {
      const ContactFrame cf = make_kmu_frame(m, kappa, kappa + 1.0);
      ns_spread = std::max(ns_spread, spread(curvature_non_sasakian(cf), cf, -2.0 * kappa - 1.0, ns_dev));
    }
  return {kmu_spread < 1e-10 && kmu_dev < 1e-10 && ns_spread < 1e-10 && ns_dev < 1e-10,
          fmt("kmu-space-form spread %.2e (|K-c| %.2e); non-sasakian mu=kappa+1 spread %.2e (|K+2kappa+1| %.2e)",
              kmu_spread, kmu_dev, ns_spread, ns_dev)};
}

// AC7: closed-form right-hand sides against the general one.
Outcome specialization() {
  double kmu_res = 0.0, ns_res = 0.0, collapse = 0.0;
  for (std::size_t k = 0; k < 1000; ++k) {
    Rng rng = derive_rng(7000, k);
    const std::size_t m = random_index(rng, 2, 5);
    const std::size_t n = random_index(rng, 2, m);
    const std::size_t n1 = random_index(rng, 1, n - 1);
    const double kappa = random_uniform(rng, -2.0, 0.95);
    const double mu = random_uniform(rng, -2.0, 3.0);
    const double c = random_uniform(rng, -5.0, 3.0);
    const bool eq = k % 2 == 1;

    const Ambient kmu = make_ambient(fmt("kmu-space-form(%zu,%.6f,%.6f,%.6f)", m, kappa, mu, c));
    const InequalityReport a = kmu_space_form_inequality(c_totally_real_data(rng, n1, n - n1, kmu, eq), c);
    kmu_res = std::max(kmu_res, a.value("specialization_residual") / std::max(1.0, std::abs(a.rhs)));

    const Ambient ns = make_ambient(fmt("non-sasakian-kmu(%zu,%.6f,%.6f)", m, kappa, mu));
    const InequalityReport b = non_sasakian_inequality(c_totally_real_data(rng, n1, n - n1, ns, eq));
    ns_res = std::max(ns_res, b.value("specialization_residual") / std::max(1.0, std::abs(b.rhs)));

    const Ambient sas = make_ambient(fmt("sasakian-space-form(%zu,%.6f)", m, c));
    const InequalityReport s = kmu_space_form_inequality(c_totally_real_data(rng, n1, n - n1, sas, eq), c);
    const double expected = s.value("mean_term") + static_cast<double>(n1) * (c + 3.0) / 4.0;
    collapse = std::max(collapse, std::abs(s.rhs - expected));
  }
  return {kmu_res < 1e-9 && ns_res < 1e-9 && collapse < 1e-12,
          fmt("1000 samples each: kmu-space-form %.2e, non-sasakian %.2e (relative), h=0 collapse %.2e", kmu_res,
              ns_res, collapse)};
}

// AC8: the three obstruction scenarios, through the scene runner.
Outcome obstruction_table() {
  struct Case {
    double c;
    const char* flag;
    const char* expected;
  };
  std::string detail;
  bool ok = true;
  for (const Case cs : {Case{-4.0, "\"harmonic\": true", "NONEXISTENCE"},
                        Case{-3.0, "\"harmonic\": true", "WARPED_PRODUCT_IMMERSION"},
                        Case{-3.0, "\"eigenvalue\": 0.5", "NONEXISTENCE"}}) {
    const std::string scene = fmt(R"js({"ambient": "sasakian-space-form(3,%g)",
      "source": {"type": "dplus-leaf", "n1": 1, "n2": 2},
      "checks": [{"name": "obstruction", %s, "minimal": true, "inequality": "kmu_space_form_inequality"}]})js",
                                  cs.c, cs.flag);
    const RunReport r = run(parse_scene_string(scene));
    const std::string& payload = r.records.at(0).payload_json;
    const std::string needle = std::string("\"verdict\": \"") + cs.expected + "\"";
    const bool hit = r.records[0].pass && payload.find(needle) != std::string::npos;
    ok = ok && hit;
    detail += fmt("c=%g %s -> %s; ", cs.c, cs.flag, hit ? cs.expected : "MISMATCH");
  }
  return {ok, detail};
}

// AC9: finite-difference curvature on constant-curvature charts and the
// per-fibre mixed sums over the warped catalog.
Outcome numeric_floor() {
  Rng rng = derive_rng(9000, 0);
  double k_err = 0.0;
  struct Chart {
    ChartMetric g;
    double K;
    Vec lo, hi;
  };
  const std::vector<Chart> charts{
      {charts::constant_curvature_2d(-1.0), -1.0, Vec{0.2, -2.0}, Vec{2.0, 2.0}},
      {charts::constant_curvature_2d(0.0), 0.0, Vec{0.2, -2.0}, Vec{2.0, 2.0}},
      {charts::constant_curvature_2d(1.0), 1.0, Vec{0.2, -2.0}, Vec{2.5, 2.0}},
      {charts::round_sphere(2), 1.0, Vec{-1.2, -3.0}, Vec{1.2, 3.0}},
      {charts::hyperbolic_plane(), -1.0, Vec{-1.5, -2.0}, Vec{1.5, 2.0}},
      {charts::euclidean(2), 0.0, Vec{-2.0, -2.0}, Vec{2.0, 2.0}},
  };
  for (const Chart& c : charts)
    for (int i = 0; i < 20; ++i) {
      const Vec x = random_in_box(rng, c.lo, c.hi);
      const CurvaturePoint cp = riemann(c.g, x.span());
      k_err = std::max(k_err, std::abs(sectional_curvature(cp, Vec::unit(2, 0), Vec::unit(2, 1)) - c.K));
    }
  double fibre = 0.0;
  std::size_t charts_checked = 0;
  for (const char* key : {"sphere(2)", "sphere(3)", "sphere(4)", "hyperbolic(1)", "hyperbolic(2)", "hyperbolic(3)",
                          "cone", "flat-product(1,1)", "flat-product(2,2)"}) {
    const CatalogChart cc = warped_catalog(key);
    for (int i = 0; i < 10; ++i) {
      const Vec x = random_in_box(rng, cc.lo, cc.hi);
      fibre = std::max(fibre, check_laplacian_ratio(cc.chart, x.span()).max_deviation);
    }
    ++charts_checked;
  }
  return {k_err < 1e-4 && fibre < 1e-3,
          fmt("constant-curvature charts max|K-K0| %.2e; %zu warped charts max per-fibre deviation %.2e", k_err,
              charts_checked, fibre)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 sphere equality", sphere_equality},
      {"AC2 randomized inequality", randomized_inequality},
      {"AC3 equality characterization", equality_characterization},
      {"AC4 lemma", lemma},
      {"AC5 curvature-model identities", curvature_models},
      {"AC6 phi-sectional constancy", phi_sectional_constancy},
      {"AC7 specialization consistency", specialization},
      {"AC8 obstruction table", obstruction_table},
      {"AC9 numeric-geometry floor", numeric_floor},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
