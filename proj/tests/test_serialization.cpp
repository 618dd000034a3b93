#include <numbers>

#include "doctest.h"
#include "spherekern/error.hpp"
#include "spherekern/serialization.hpp"

using namespace spherekern;

TEST_SUITE("serialization") {

TEST_CASE("scalar expansion round trip") {
  const ScalarExpansion e{5, {1.0, 0.25, 0.0, 1e-17}};
  const Json j = to_json(e);
  CHECK(j["r"] == 0);
  CHECK(j["alpha"] == 1.5);
  CHECK(j["d_max"] == 3);
  CHECK_FALSE(is_bundle_expansion(j));
  const ScalarExpansion back = scalar_expansion_from_json(Json::parse(j.dump()));
  CHECK(back.n == 5);
  CHECK(back.coefficients == e.coefficients);
}

TEST_CASE("bundle expansion round trip evaluates identically") {
  const BundleExpansion e = BundleExpansion::random(6, 2, 3, 2, 9);
  const Json j = to_json(e);
  CHECK(is_bundle_expansion(j));
  CHECK(j["feature_map_spec"].size() == 4);
  const BundleExpansion back = bundle_expansion_from_json(Json::parse(j.dump()));
  const Kernel a = synth_bundle_kernel(e);
  const Kernel b = synth_bundle_kernel(back);
  Rng rng = make_rng(3);
  for (int i = 0; i < 10; ++i) {
    const SphereConfig cfg = sample_config(6, 2, rng);
    const auto x = sample_sphere_point(6, rng);
    const auto y = sample_sphere_point(6, rng);
    CHECK(a(x, y, cfg) == b(x, y, cfg));
  }
}

TEST_CASE("only feature maps serialize") {
  BundleExpansion e{5, 2, {CoefficientKernel([](const Eigen::VectorXd&, const Eigen::VectorXd&,
                                                const Eigen::MatrixXd&) { return 1.0; })}};
  CHECK_THROWS_AS(to_json(e), DomainError);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(scalar_expansion_from_json(Json{{"n", 3}}), DomainError);
  CHECK_THROWS_AS(scalar_expansion_from_json(Json{{"n", "three"}, {"coefficients", {1.0}}}),
                  DomainError);
  CHECK_THROWS_AS(
      scalar_expansion_from_json(Json{{"n", 3}, {"d_max", 4}, {"coefficients", {1.0, 2.0}}}),
      DomainError);
  CHECK_THROWS_AS(bundle_expansion_from_json(Json{{"n", 5}, {"r", 2}, {"feature_map_spec", 3}}),
                  DomainError);
  CHECK_THROWS_AS(certificate_from_json(Json{{"n", 3}, {"theta", 1.0}, {"coefficients", Json::array()}}),
                  DomainError);
  CHECK_THROWS_AS(certificate_from_json(
                      Json{{"n", 3}, {"theta", 1.0}, {"coefficients", {1.0}}, {"bound", "big"}}),
                  DomainError);
  CHECK_NOTHROW(certificate_from_json(Json{{"n", 3}, {"theta", 1.0}, {"coefficients", {1.0, 0.5}}}));
}

TEST_CASE("certificate round trip") {
  LPCertificate c;
  c.n = 8;
  c.theta = std::numbers::pi / 3;
  c.d_max = 2;
  c.coefficients = {1.0, 0.5, 0.25};
  c.bound = 240.0;
  c.max_violation = -1e-4;
  c.solve_grid_points = 1600;
  c.refinement_rounds = 1;
  c.margin = 1e-5;
  const LPCertificate back = certificate_from_json(Json::parse(to_json(c).dump()));
  CHECK(back.n == 8);
  CHECK(back.theta == c.theta);
  CHECK(back.coefficients == c.coefficients);
  CHECK(back.bound == 240.0);
  CHECK(back.solve_grid_points == 1600);
}

TEST_CASE("reports") {
  const PdCheck pd = check_pd(builtin_kernel("neg-dot", 3), 2, 5, 1);
  const Json j = to_json(pd);
  CHECK(j["pass"] == false);
  CHECK(j["witness"]["points"].size() == 5);
  CHECK(j["witness"]["points"][0].size() == 3);
  const Json inv = to_json(check_invariance(builtin_kernel("dot", 3), 5, 1));
  CHECK(inv["pass"] == true);
  CHECK(inv.contains("max_residual"));
}

}  // TEST_SUITE
