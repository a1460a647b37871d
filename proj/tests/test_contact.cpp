#include <doctest.h>

#include <cmath>

#include "warpcheck/contact.hpp"

using namespace warpcheck;

namespace {

Vec unit_horizontal(Rng& rng, const ContactFrame& cf) {
  Vec X = random_gaussian(rng, cf.dim());
  X -= dot(cf.xi, X) * cf.xi;
  return (1.0 / norm(X)) * X;
}

}  // namespace

TEST_SUITE("contact") {

TEST_CASE("canonical (kappa, mu) frame satisfies the structure identities") {
  for (double kappa : {-2.0, 0.0, 0.5, 1.0}) {
    const ContactFrame cf = make_kmu_frame(3, kappa, 0.7);
    CHECK(frame_residuals(cf).max() < 1e-14);
    CHECK_NOTHROW(validate_frame(cf));
    CHECK(cf.lambda() == doctest::Approx(std::sqrt(1.0 - kappa)));
    CHECK(cf.sasakian() == (kappa == 1.0));
  }
}

TEST_CASE("broken frames are rejected") {
  ContactFrame cf = make_kmu_frame(2, 0.5, 0.0);
  cf.phi(1, 3) += 1e-3;
  CHECK_THROWS_AS(validate_frame(cf), Error);
}

TEST_CASE("h eigenvectors sit at the documented indices") {
  const ContactFrame cf = make_kmu_frame(3, 0.19, 1.0);
  const double l = cf.lambda();
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec u = Vec::unit(cf.dim(), dplus_index(i));
    const Vec v = Vec::unit(cf.dim(), dminus_index(3, i));
    CHECK(max_abs(cf.h * u - l * u) < 1e-15);
    CHECK(max_abs(cf.h * v + l * v) < 1e-15);
    CHECK(max_abs(cf.phi * u - v) < 1e-15);
  }
}

TEST_CASE("curvature models satisfy the (kappa, mu) nullity condition and symmetries") {
  Rng rng = derive_rng(31, 0);
  for (const char* key : {"kmu-space-form(2,0.5,1.5,-2)", "kmu-space-form(3,-1,0,2)",
                          "sasakian-space-form(2,1)", "non-sasakian-kmu(3,0.3,2)", "non-sasakian-kmu(2,-3,-1)"}) {
    const Ambient a = make_ambient(key);
    CAPTURE(key);
    CHECK(check_km_condition(a.oracle, *a.contact) < 1e-12);
    CHECK(oracle_symmetries(a.oracle, rng, 200).max() < 1e-11);
  }
}

TEST_CASE("real space forms") {
  const CurvatureOracle o = real_space_form(4, -2.0);
  CHECK(o.sectional(Vec::unit(4, 0), Vec::unit(4, 3)) == doctest::Approx(-2.0));
  CHECK(o.sectional(Vec{1.0, 1.0, 0.0, 0.0}, Vec{0.0, 2.0, 0.0, 0.0}) == doctest::Approx(-2.0));
}

TEST_CASE("kmu model at kappa = 1 is the Sasakian space form") {
  const ContactFrame cf = make_kmu_frame(3, 1.0, 0.0);
  const CurvatureOracle kmu = curvature_kmu_space_form(cf, -1.5);
  const CurvatureOracle sas = curvature_sasakian_space_form(cf, -1.5);
  Rng rng = derive_rng(32, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec X = random_gaussian(rng, 7), Y = random_gaussian(rng, 7), Z = random_gaussian(rng, 7),
              W = random_gaussian(rng, 7);
    CHECK(std::abs(kmu(X, Y, Z, W) - sas(X, Y, Z, W)) < 1e-12);
  }
  CHECK_THROWS_AS(curvature_sasakian_space_form(make_kmu_frame(3, 0.5, 0.0), 1.0), Error);
}

TEST_CASE("phi-sectional curvature") {
  Rng rng = derive_rng(33, 0);
  const Ambient a = make_ambient("sasakian-space-form(3,-4)");
  for (int i = 0; i < 10; ++i)
    CHECK(phi_sectional(a.oracle, *a.contact, unit_horizontal(rng, *a.contact)) == doctest::Approx(-4.0));
  const Ambient b = make_ambient("non-sasakian-kmu(2,0.4,1.4)");
  for (int i = 0; i < 10; ++i)
    CHECK(phi_sectional(b.oracle, *b.contact, unit_horizontal(rng, *b.contact)) == doctest::Approx(-1.8));
  CHECK_THROWS_AS(phi_sectional(a.oracle, *a.contact, a.contact->xi), Error);
}

TEST_CASE("Sasakian sectional curvature along xi is one") {
  const Ambient a = make_ambient("sasakian-space-form(2,5)");
  CHECK(a.oracle.sectional(a.contact->xi, Vec::unit(5, 1)) == doctest::Approx(1.0));
}

TEST_CASE("tangent sphere bundle parameters") {
  const KmuParameters p = tangent_sphere_bundle_parameters(2.0);
  CHECK(p.kappa == doctest::Approx(0.0));
  CHECK(p.mu == doctest::Approx(-4.0));
  const Ambient a = make_ambient("tangent-sphere-bundle(0.5)");
  CHECK(a.contact->kappa == doctest::Approx(0.75));
  CHECK(a.contact->mu == doctest::Approx(-1.0));
  const Ambient ex = make_ambient("tangent-sphere-bundle-example(0.5)");
  CHECK(ex.contact->mu == doctest::Approx(1.0));
  CHECK_FALSE(ex.notes.empty());
}

TEST_CASE("ambient descriptors") {
  CHECK(make_ambient("euclidean(5)").dim == 5);
  CHECK(make_ambient("real-space-form(4,1)").dim == 4);
  CHECK(make_ambient("real-space-form(-1)", 6).dim == 6);
  CHECK_THROWS_AS(make_ambient("real-space-form(-1)"), Error);
  CHECK(make_ambient("kmu-space-form(2,0,1,-1)").dim == 5);
  CHECK_THROWS_AS(make_ambient("hyperkahler(4)"), Error);
  try {
    (void)make_ambient("non-sasakian-kmu(2,1,0)");
    FAIL("expected singular_parameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_parameter);
  }
  CHECK_FALSE(ambient_catalog_keys().empty());
}

}
