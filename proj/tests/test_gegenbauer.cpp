#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spherekern/error.hpp"
#include "spherekern/gegenbauer.hpp"

using namespace spherekern;

namespace {

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_SUITE("gegenbauer") {

TEST_CASE("recurrence matches the explicit sum") {
  for (double alpha : {0.25, 0.5, 1.0, 1.5, 3.0, 7.5}) {
    for (int d = 0; d <= 20; ++d) {
      for (double t : {-1.0, -0.83, -0.2, 0.0, 0.37, 0.9, 1.0}) {
        INFO("alpha=" << alpha << " d=" << d << " t=" << t);
        CHECK(close(eval_gegenbauer(alpha, d, t), oracle::gegenbauer(alpha, d, t), 1e-11));
      }
    }
  }
}

TEST_CASE("low degrees by hand") {
  // alpha = 1/2 gives Legendre polynomials.
  CHECK(eval_gegenbauer(0.5, 2, 0.5) == doctest::Approx(-0.125));
  CHECK(eval_gegenbauer(0.5, 3, 0.5) == doctest::Approx(-0.4375));
  // alpha = 1: Chebyshev U_d(cos x) = sin((d+1)x)/sin x.
  const double x = 0.7;
  CHECK(eval_gegenbauer(1.0, 5, std::cos(x)) == doctest::Approx(std::sin(6 * x) / std::sin(x)));
}

TEST_CASE("value at one is the rising factorial ratio") {
  for (double alpha : {0.5, 1.5, 2.0}) {
    double expected = 1.0;
    for (int d = 0; d <= 15; ++d) {
      if (d > 0) expected *= (2 * alpha + d - 1) / d;
      CHECK(close(eval_gegenbauer(alpha, d, 1.0), expected, 1e-13));
    }
  }
}

TEST_CASE("eval_all agrees with single evaluations") {
  const auto all = eval_gegenbauer_all(1.5, 12, 0.3);
  REQUIRE(all.size() == 13);
  for (int d = 0; d <= 12; ++d) CHECK(all[d] == doctest::Approx(eval_gegenbauer(1.5, d, 0.3)));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval_gegenbauer(1.0, -1, 0.0), DomainError);
  CHECK_THROWS_AS(eval_gegenbauer(1.0, 2, 1.0 + 1e-9), DomainError);
  CHECK_NOTHROW(eval_gegenbauer(1.0, 2, 1.0 + 1e-13));
  CHECK_THROWS_AS(GegenbauerBasis(0.1, 4), DomainError);
  CHECK_THROWS_AS(gauss_gegenbauer(1.0, 0), DomainError);
}

TEST_CASE("norms match the closed form and the exact moment integral") {
  for (double alpha : {0.5, 1.0, 1.5, 3.0}) {
    const GegenbauerBasis basis(alpha, 20);
    for (int k = 0; k <= 20; ++k) {
      INFO("alpha=" << alpha << " k=" << k);
      const double closed = oracle::norm_closed_form(alpha, k);
      CHECK(close(basis.norm(k), closed, 1e-11));
      CHECK(close(gegenbauer_norm(alpha, k), closed, 1e-11));
      if (k % 5 == 0) {
        const auto c = oracle::gegenbauer_monomials(alpha, k);
        CHECK(close(static_cast<double>(oracle::weighted_inner(alpha, c, c)), closed, 1e-14));
      }
    }
  }
}

TEST_CASE("gauss rule exactness and structure") {
  for (double alpha : {0.25, 0.5, 2.0, 4.5}) {
    const auto rule = gauss_gegenbauer(alpha, 12);
    CHECK(rule.size() == 12);
    CHECK(rule.exact_degree() == 23);
    double mass = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      mass += rule.weights[i];
      CHECK(rule.weights[i] > 0.0);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.size() - 1 - i]).epsilon(1e-14));
    }
    CHECK(close(mass, gegenbauer_weight_mass(alpha), 1e-13));
    for (int m = 0; m <= 23; ++m) {
      const double exact = static_cast<double>(oracle::moment(alpha, m));
      CHECK(std::abs(rule.integrate([m](double t) { return std::pow(t, m); }) - exact) < 1e-13);
    }
  }
}

TEST_CASE("norm on a rule that is too small") {
  const auto rule = gauss_gegenbauer(1.0, 3);
  CHECK_NOTHROW(gegenbauer_norm(rule, 2));
  CHECK_THROWS_AS(gegenbauer_norm(rule, 3), QuadratureError);
}

TEST_CASE("orthogonality on the quadrature grid") {
  for (int n : {3, 4, 5, 8}) {
    const double alpha = n / 2.0 - 1.0;
    const GegenbauerBasis basis(alpha, 20);
    const auto& q = basis.quadrature();
    for (int i = 0; i <= 20; ++i) {
      for (int j = i + 1; j <= 20; ++j) {
        const double ip = q.integrate([&](double t) { return basis.eval(i, t) * basis.eval(j, t); });
        CHECK(std::abs(ip) < 1e-10 * std::sqrt(basis.norm(i) * basis.norm(j)));
      }
    }
  }
}

TEST_CASE("expansion of powers matches exact projections") {
  for (double alpha : {0.5, 1.5}) {
    for (int m : {0, 1, 3, 6}) {
      const auto got = expand_univariate([m](double t) { return std::pow(t, m); }, alpha, 8);
      const auto want = oracle::power_coefficients(alpha, m, 8);
      for (int k = 0; k <= 8; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);
    }
  }
}

TEST_CASE("expand inverts synthesize") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GegenbauerBasis basis(2.0, 10);
  std::vector<double> c(11);
  for (auto& v : c) v = u(rng);
  const auto back = basis.expand([&](double t) { return basis.synthesize(c, t); });
  for (int k = 0; k <= 10; ++k) CHECK(std::abs(back[k] - c[k]) < 1e-12);
  CHECK(synthesize_univariate(c, 2.0, 0.4) == doctest::Approx(basis.synthesize(c, 0.4)));
}

TEST_CASE("clamp_cosine") {
  CHECK(clamp_cosine(1.0 + 1e-14) == 1.0);
  CHECK(clamp_cosine(-1.0 - 1e-14) == -1.0);
  CHECK(clamp_cosine(1.5) == 1.5);
  CHECK(clamp_cosine(0.25) == 0.25);
}

}  // TEST_SUITE
