#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spherekern/error.hpp"
#include "spherekern/lp_bound.hpp"

using namespace spherekern;

namespace {

LPBoundProblem problem(int n, double theta, int d_max = 12) {
  LPBoundProblem p;
  p.n = n;
  p.theta = theta;
  p.d_max = d_max;
  return p;
}

constexpr double kSixty = std::numbers::pi / 3.0;

}  // namespace

TEST_SUITE("lp_bound") {

TEST_CASE("bounds at sixty degrees match the dense-grid oracle") {
  struct Case {
    int n;
    double oracle;
    double tol;
  };
  for (const Case c : {Case{3, oracle::kDelsarteN3, 0.05}, Case{4, oracle::kDelsarteN4, 0.1},
                       Case{8, oracle::kDelsarteN8, 0.5}}) {
    const LPBoundProblem p = problem(c.n, kSixty);
    const LPCertificate cert = delsarte_lp(p);
    INFO("n=" << c.n << " bound=" << cert.bound);
    CHECK(std::abs(cert.bound - c.oracle) < c.tol);
    CHECK(cert.coefficients[0] == 1.0);
    for (double v : cert.coefficients) CHECK(v >= 0.0);
    const MarginReport m = certify(cert, p, 10);
    CHECK(m.pass);
    CHECK(m.max_violation <= kCertificateTolerance);
    CHECK(m.grid_points == 10 * p.grid_points);
  }
}

TEST_CASE("bound is monotone in degree and angle") {
  const double d8 = delsarte_lp(problem(4, kSixty, 8)).bound;
  const double d12 = delsarte_lp(problem(4, kSixty, 12)).bound;
  CHECK(d12 <= d8 + 1e-6);
  double previous = INFINITY;
  for (double deg : {30.0, 45.0, 60.0, 90.0, 120.0}) {
    const double b = delsarte_lp(problem(3, deg * std::numbers::pi / 180.0, 10)).bound;
    CHECK(b < previous);
    previous = b;
  }
}

TEST_CASE("column scaling does not change the bound") {
  LPBoundProblem p = problem(5, kSixty);
  const double scaled = delsarte_lp(p).bound;
  p.normalize_columns = false;
  const double raw = delsarte_lp(p).bound;
  CHECK(std::abs(scaled - raw) < 1e-6 * scaled);
}

TEST_CASE("antipodal limit") {
  const LPCertificate cert = delsarte_lp(problem(3, std::numbers::pi, 4));
  // The grid is the single point -1; the safety margin shifts the optimum by about 1e-9.
  CHECK(std::abs(cert.bound - 2.0) < 1e-8);
  CHECK(problem(3, std::numbers::pi).grid() == std::vector<double>{-1.0});
}

TEST_CASE("orthogonal codes") {
  // At ninety degrees the optimum 2n is attained by the cross polytope.
  for (int n : {3, 4, 6}) {
    const double b = delsarte_lp(problem(n, std::numbers::pi / 2.0, 6)).bound;
    CHECK(std::abs(b - 2.0 * n) < 1e-3);
  }
}

TEST_CASE("certify rejects bad certificates") {
  const LPBoundProblem p = problem(3, kSixty);
  LPCertificate cert = delsarte_lp(p);
  LPCertificate bumped = cert;
  bumped.coefficients[1] += 10.0;
  CHECK_FALSE(certify(bumped, p, 10).pass);
  LPCertificate constant = cert;
  constant.coefficients.assign(constant.coefficients.size(), 0.0);
  constant.coefficients[0] = 1.0;
  const MarginReport m = certify(constant, p, 10);
  CHECK_FALSE(m.pass);
  CHECK(m.max_violation == doctest::Approx(1.0));
  LPCertificate negative = cert;
  negative.coefficients[3] = -1e-3;
  CHECK_FALSE(certify(negative, p, 10).pass);
  CHECK_THROWS_AS(certify(cert, p, 0), DomainError);
}

TEST_CASE("grid") {
  const auto g = problem(3, kSixty).grid(50);
  CHECK(g.size() == 50);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == doctest::Approx(0.5));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(delsarte_lp(problem(2, kSixty)), DomainError);
  CHECK_THROWS_AS(delsarte_lp(problem(3, 0.0)), DomainError);
  CHECK_THROWS_AS(delsarte_lp(problem(3, 4.0)), DomainError);
  CHECK_THROWS_AS(delsarte_lp(problem(3, kSixty, 61)), DomainError);
  CHECK_THROWS_AS(delsarte_lp(problem(3, kSixty, 0)), LPError);
}

}  // TEST_SUITE
