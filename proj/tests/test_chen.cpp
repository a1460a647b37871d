#include <doctest.h>

#include <cmath>

#include "warpcheck/chen.hpp"

using namespace warpcheck;

TEST_SUITE("chen") {

TEST_CASE("lemma at its equality case") {
  const std::vector<double> a{1.0, 2.0, 3.0, 3.0};
  const double b = admissible_b(a);
  CHECK(b == doctest::Approx(4.0));
  const LemmaResult r = chen_lemma(a, b);
  CHECK(r.holds);
  CHECK(r.equality);
  CHECK(r.margin == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("lemma away from equality") {
  const std::vector<double> a{1.0, -2.0, 0.5};
  const LemmaResult r = chen_lemma(a, admissible_b(a));
  CHECK(r.holds);
  CHECK_FALSE(r.equality);
  CHECK(r.margin > 0.0);
}

TEST_CASE("two numbers always give equality") {
  const std::vector<double> a{0.3, 1.7};
  const LemmaResult r = chen_lemma(a, admissible_b(a));
  CHECK(r.equality);
  CHECK(r.margin == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("inadmissible tuples are rejected") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  try {
    (void)chen_lemma(a, admissible_b(a) + 0.1);
    FAIL("expected inadmissible_tuple");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::inadmissible_tuple);
  }
  CHECK_THROWS_AS(chen_lemma(std::vector<double>{1.0}, 0.0), Error);
}

TEST_CASE("proof decomposition identities") {
  Rng rng = derive_rng(50, 0);
  for (const char* key : {"euclidean(6)", "non-sasakian-kmu(3,0.2,0.5)"}) {
    const Ambient a = make_ambient(key);
    for (int i = 0; i < 50; ++i) {
      const PointwiseImmersionData d = random_immersion_data(rng, 2, 2, a);
      const ProofDecomposition p = decompose(d);
      const double s = std::max({1.0, p.sigma_norm2, std::abs(p.delta)});
      CHECK(std::abs(p.a_i_residual) < 1e-10 * s);
      CHECK(std::abs(p.h_delta_sigma_residual) < 1e-10 * s);
      CHECK(p.lemma_margin >= -1e-10 * s);
      CHECK(std::abs(p.lemma_margin - 2.0 * (p.ab_lhs - p.ab_rhs)) < 1e-10 * s);
      CHECK(p.h_defined_direction);
      // after rotating e_{n+1} onto H, H has no other component
      for (std::size_t r = 1; r < p.trace1.size(); ++r)
        CHECK(std::abs(p.trace1[r] + p.trace2[r]) < 1e-10 * s);
    }
  }
}

TEST_CASE("minimal data keeps the original normal frame") {
  const PointwiseImmersionData d = dplus_leaf(make_ambient("sasakian-space-form(2,1)"), 1, 1);
  const ProofDecomposition p = decompose(d);
  CHECK_FALSE(p.h_defined_direction);
  CHECK(p.delta == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("inequality holds on random data and on the equality family") {
  Rng rng = derive_rng(51, 0);
  const Ambient a = make_ambient("kmu-space-form(3,0.5,1.5,-2)");
  for (int i = 0; i < 100; ++i) {
    const InequalityReport r = general_inequality(random_immersion_data(rng, 1, 3, a));
    CHECK(r.holds);
    CHECK(r.gap >= -1e-9);
    CHECK(r.equality_consistent());
    const InequalityReport e = general_inequality(equality_immersion_data(rng, 1, 3, a));
    CHECK(e.equality);
    CHECK(e.diagnostics.mixed_totally_geodesic);
    CHECK(e.diagnostics.partial_mean_equal);
  }
}

TEST_CASE("tau proxy equals the Gauss mixed scalar over n2") {
  Rng rng = derive_rng(52, 0);
  const PointwiseImmersionData d = random_immersion_data(rng, 2, 3, make_ambient("euclidean(8)"));
  const InequalityReport r = general_inequality(d);
  CHECK(r.lhs == doctest::Approx(gauss_mixed_scalar(d) / 3.0));
  CHECK(r.value("ambient_term") == doctest::Approx(ambient_mixed_scalar(d) / 3.0).scale(1.0));
}

TEST_CASE("closed forms agree with the general right-hand side") {
  Rng rng = derive_rng(53, 0);
  for (const char* key : {"kmu-space-form(3,0.5,1.5,-2)", "sasakian-space-form(3,-2)"}) {
    const Ambient a = make_ambient(key);
    for (int i = 0; i < 30; ++i) {
      const InequalityReport r = kmu_space_form_inequality(c_totally_real_data(rng, 1, 2, a, false), *a.c);
      CHECK(r.value("specialization_residual") < 1e-10 * std::max(1.0, std::abs(r.rhs)));
      if (a.contact->sasakian()) CHECK(r.value("sasakian_collapse_residual") < 1e-12);
    }
  }
  const Ambient ns = make_ambient("non-sasakian-kmu(4,0.3,2)");
  double opposite_gap = 0.0;
  for (int i = 0; i < 30; ++i) {
    const InequalityReport r = non_sasakian_inequality(c_totally_real_data(rng, 2, 2, ns, false));
    CHECK(r.value("specialization_residual") < 1e-10 * std::max(1.0, std::abs(r.rhs)));
    opposite_gap = std::max(opposite_gap, std::abs(r.value("rhs_opposite_sign") - r.rhs));
  }
  CHECK(opposite_gap > 1e-3);
}

TEST_CASE("specialized inequalities need C-totally real data") {
  Rng rng = derive_rng(54, 0);
  const Ambient a = make_ambient("sasakian-space-form(3,1)");
  CHECK_THROWS_AS(kmu_space_form_inequality(random_immersion_data(rng, 1, 2, a), 1.0), Error);
  const Ambient e = make_ambient("euclidean(5)");
  CHECK_THROWS_AS(non_sasakian_inequality(random_immersion_data(rng, 1, 2, e)), Error);
}

TEST_CASE("chart left-hand side") {
  const ChartImmersion im = immersion_catalog("sphere-in-euclidean(2)");
  const std::vector<double> p{0.3, 1.1};
  const PointwiseImmersionData d = second_fundamental_form(im, p);
  const InequalityReport r = general_inequality(d, LhsSource::chart(chart_laplacian_ratio(im, p)), {1e-3, 1e-3, 1e-9});
  CHECK(r.lhs_source == "chart");
  CHECK(r.value("lhs_agreement") < 1e-4);
  CHECK(std::abs(r.gap) < 1e-3);
  CHECK(r.equality);
}

TEST_CASE("obstruction verdicts") {
  auto verdict = [](double c, ObstructionFlags flags) {
    const PointwiseImmersionData d = dplus_leaf(make_ambient("sasakian-space-form(3," + std::to_string(c) + ")"), 1, 2);
    return obstruction_check(kmu_space_form_inequality(d, c), flags).verdict;
  };
  CHECK(verdict(-4.0, {true, {}, true}) == Verdict::nonexistence);
  CHECK(verdict(-3.0, {true, {}, true}) == Verdict::warped_product_immersion);
  CHECK(verdict(-3.0, {false, 0.5, true}) == Verdict::nonexistence);
  CHECK(verdict(1.0, {true, {}, true}) == Verdict::unobstructed);
  CHECK(verdict(-4.0, {true, {}, false}) == Verdict::unobstructed);
  CHECK(to_string(Verdict::nonexistence) == "NONEXISTENCE");
}

TEST_CASE("obstruction flag errors") {
  const PointwiseImmersionData d = dplus_leaf(make_ambient("sasakian-space-form(2,1)"), 1, 1);
  const InequalityReport r = general_inequality(d);
  CHECK_THROWS_AS(obstruction_check(r, {true, 1.0, true}), Error);
  CHECK_THROWS_AS(obstruction_check(r, {false, {}, true}), Error);
  // a chart Laplacian that contradicts the harmonic flag
  const ChartImmersion im = immersion_catalog("sphere-in-euclidean(2)");
  const std::vector<double> p{0.3, 1.1};
  const InequalityReport chart = general_inequality(second_fundamental_form(im, p), LhsSource::chart(1.0));
  CHECK_THROWS_AS(obstruction_check(chart, {true, {}, false}), Error);
  // sphere is not minimal
  CHECK_THROWS_AS(obstruction_check(chart, {false, 1.0, true}), Error);
}

}
