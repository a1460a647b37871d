#include <doctest.h>

#include <cmath>

#include "warpcheck/immersion.hpp"

using namespace warpcheck;

TEST_SUITE("immersion") {

TEST_CASE("unit sphere is totally umbilical with H = 1") {
  const ChartImmersion im = immersion_catalog("sphere-in-euclidean(3)");
  const std::vector<double> p{0.3, -0.2, 1.1};
  const PointwiseImmersionData d = second_fundamental_form(im, p);
  REQUIRE(d.codim() == 1);
  CHECK(max_abs(d.sigma[0] - Mat::identity(3)) < 1e-6);
  const MeanCurvatureRecord mc = mean_curvatures(d);
  CHECK(mc.norm_H == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mc.norm_H1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mc.additivity_residual < 1e-12);
  CHECK(gauss_residual(d, IntrinsicSource::chart).max() < 1e-4);
  CHECK(chart_laplacian_ratio(im, p) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cylinder principal curvatures") {
  const PointwiseImmersionData d = second_fundamental_form(immersion_catalog("cylinder"), std::vector<double>{0.4, 0.2});
  CHECK(d.sigma[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d.sigma[0](1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(mean_curvatures(d).norm_H == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(is_mixed_totally_geodesic(d, 1e-6));
}

TEST_CASE("plane is totally geodesic") {
  const PointwiseImmersionData d = second_fundamental_form(immersion_catalog("plane"), std::vector<double>{0.4, 0.2});
  CHECK(sigma_norm2(d) < 1e-12);
}

TEST_CASE("validation") {
  const Ambient a = make_ambient("euclidean(4)");
  Rng rng = derive_rng(40, 0);
  PointwiseImmersionData d = random_immersion_data(rng, 1, 2, a);
  CHECK_NOTHROW(validate(d));
  PointwiseImmersionData asym = d;
  asym.sigma[0](0, 1) += 1e-3;
  CHECK_THROWS_AS(validate(asym), Error);
  PointwiseImmersionData bent = d;
  bent.frame(0, 0) += 1e-3;
  CHECK_THROWS_AS(validate(bent), Error);
  PointwiseImmersionData short_sigma = d;
  short_sigma.sigma.clear();
  CHECK_THROWS_AS(validate(short_sigma), Error);
}

TEST_CASE("Gauss equation is self-consistent on random data") {
  Rng rng = derive_rng(41, 0);
  const Ambient a = make_ambient("kmu-space-form(3,0.5,1.5,-2)");
  for (int i = 0; i < 20; ++i) {
    const PointwiseImmersionData d = random_immersion_data(rng, 2, 2, a);
    const GaussReport g = gauss_residual(d, IntrinsicSource::gauss);
    CHECK(g.max() < 1e-10 * std::max(1.0, g.sigma_norm2));
    // K(e_i∧e_j) = K̃ + ⟨σ_ii, σ_jj⟩ − |σ_ij|²
    const double k = a.oracle.sectional(d.tangent(0), d.tangent(3)) + dot(d.sigma_vec(0, 0), d.sigma_vec(3, 3)) -
                     dot(d.sigma_vec(0, 3), d.sigma_vec(0, 3));
    CHECK(gauss_sectional(d, 0, 3) == doctest::Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("equality data is mixed totally geodesic with balanced traces") {
  Rng rng = derive_rng(42, 0);
  const Ambient a = make_ambient("euclidean(7)");
  const PointwiseImmersionData d = equality_immersion_data(rng, 2, 3, a);
  CHECK(is_mixed_totally_geodesic(d));
  const MeanCurvatureRecord mc = mean_curvatures(d);
  CHECK(max_abs(2.0 * mc.H1 - 3.0 * mc.H2) < 1e-12);
  PointwiseImmersionData p = d;
  perturb_cross(p, 0, 1, 3, 1e-2);
  CHECK(mixed_residual(p) == doctest::Approx(1e-2));
  CHECK_THROWS_AS(perturb_cross(p, 0, 3, 1, 1.0), Error);
}

TEST_CASE("C-totally real data") {
  Rng rng = derive_rng(43, 0);
  for (const char* key : {"non-sasakian-kmu(4,0.3,1.2)", "sasakian-space-form(3,-1)"}) {
    const Ambient a = make_ambient(key);
    for (bool eq : {false, true}) {
      const PointwiseImmersionData d = c_totally_real_data(rng, 1, 2, a, eq);
      const CTotallyRealReport r = is_C_totally_real(d, 1e-10);
      CHECK(r.value);
      CHECK(a_xi_identity(d).residual < 1e-12);
    }
  }
  const Ambient a = make_ambient("sasakian-space-form(2,1)");
  CHECK_THROWS_AS(c_totally_real_data(rng, 2, 1, a, false), Error);
  const PointwiseImmersionData generic = random_immersion_data(rng, 1, 1, a);
  CHECK_FALSE(is_C_totally_real(generic).value);
}

TEST_CASE("leaves of the positive eigendistribution") {
  const NamedPointwise leaf = pointwise_catalog("dplus-leaf(3,0.5,1)");
  CHECK(leaf.data.n1 == 1);
  CHECK(leaf.data.n2 == 2);
  CHECK(is_C_totally_real(leaf.data).value);
  const AXiReport ax = a_xi_identity(leaf.data);
  CHECK(ax.residual < 1e-14);
  // h = λ on 𝒟₊, so tr hᵀ = nλ
  CHECK(ax.h.trace == doctest::Approx(3.0 * std::sqrt(0.5)));
  CHECK_THROWS_AS(pointwise_catalog("dplus-leaf(3,0.5)"), Error);
}

TEST_CASE("block quantities") {
  const Mat m{{1.0, 2.0, 0.0}, {2.0, 3.0, 1.0}, {0.0, 1.0, 5.0}};
  const BlockQuantities q = block_quantities(m, 2);
  CHECK(q.trace == 9.0);
  CHECK(q.trace1 == 4.0);
  CHECK(q.trace2 == 5.0);
  CHECK(q.norm2 == 45.0);
  CHECK(q.norm2_1 == 18.0);
  CHECK(q.norm2_2 == 25.0);
}

TEST_CASE("catalog") {
  CHECK(is_chart_immersion_key("sphere-in-euclidean(4)"));
  CHECK_FALSE(is_chart_immersion_key("dplus-leaf(3,0.5,1)"));
  CHECK_THROWS_AS(immersion_catalog("torus"), Error);
  CHECK(immersion_catalog("sphere-in-euclidean(2)").ambient.dim == 3);
}

}
