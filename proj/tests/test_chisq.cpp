#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"
#include "wscan/chisq.hpp"
#include "wscan/errors.hpp"

#include <cmath>

using namespace wscan;

namespace {

double rel(double a, long double b) {
  return static_cast<double>(std::fabs(a - b) / std::fabs(b));
}

}  // namespace

TEST_CASE("critical values") {
  CHECK(rel(chisq_sf(3.841458821, 1), 0.049999999990879L) < 1e-10);
  CHECK(rel(chisq_sf(15.50731306, 8), 0.049999999931071966L) < 1e-10);
  CHECK(rel(chisq_sf(0.68968512046433261, 2), std::exp(-0.68968512046433261L / 2)) < 1e-13);
}

TEST_CASE("closed forms for even df") {
  // Q(1, x/2) = exp(-x/2); Q(2, x/2) = (1 + x/2) exp(-x/2).
  for (double x : {0.001, 0.5, 3.0, 17.0, 80.0, 400.0}) {
    CHECK(rel(chisq_sf(x, 2), std::exp(-(long double)x / 2)) < 1e-12);
    CHECK(rel(chisq_sf(x, 4), (1 + (long double)x / 2) * std::exp(-(long double)x / 2)) < 1e-12);
  }
}

TEST_CASE("agrees with quadrature over a grid") {
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.01 * std::pow(6000.0, i / 9.0);  // 0.01 .. 60
    for (int j = 0; j < 10; ++j) {
      const double f = 0.5 + 11.5 * j / 9.0;
      const long double ref = oracle::quad_chisq_sf(x, f);
      const double got = chisq_sf(x, f);
      worst = std::max(worst, rel(got, ref));
      INFO("x=" << x << " f=" << f);
      CHECK(rel(got, ref) < 1e-10);
      CHECK(chisq_cdf(x, f) == doctest::Approx(static_cast<double>(1 - ref)).epsilon(1e-10));
    }
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("incomplete gamma identities") {
  for (double a : {0.3, 1.0, 2.5, 7.0, 30.0}) {
    for (double x : {0.1, 1.0, 5.0, 29.0, 60.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  // Recurrence Q(a+1, x) = Q(a, x) + x^a e^-x / Gamma(a+1).
  for (double a : {0.5, 1.5, 4.0}) {
    for (double x : {0.3, 2.0, 9.0}) {
      const double lhs = gamma_q(a + 1, x);
      const double rhs = gamma_q(a, x) + std::exp(a * std::log(x) - x - std::lgamma(a + 1));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
}

TEST_CASE("monotone in x, decreasing") {
  for (double f : {0.5, 1.0, 3.0, 8.0}) {
    double prev = 1.0;
    for (double x = 0.0; x < 80.0; x += 0.25) {
      const double p = chisq_sf(x, f);
      CHECK(p <= prev);
      CHECK(p >= 0.0);
      prev = p;
    }
  }
  CHECK(chisq_sf(0.0, 3.0) == 1.0);
  CHECK(chisq_sf(INFINITY, 3.0) == 0.0);
}

TEST_CASE("far tail keeps relative precision") {
  const double p = chisq_sf(400.0, 2.0);
  CHECK(p > 0.0);
  CHECK(rel(p, std::exp(-200.0L)) < 1e-12);
}

TEST_CASE("pdf integrates to the cdf") {
  const double f = 3.3;
  const double x = 4.0;
  const int n = 4000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double a = x * i / n, b = x * (i + 1) / n;
    sum += (b - a) / 6 * (chisq_pdf(std::max(a, 1e-12), f) + 4 * chisq_pdf((a + b) / 2, f) + chisq_pdf(b, f));
  }
  CHECK(sum == doctest::Approx(chisq_cdf(x, f)).epsilon(1e-5));
}

TEST_CASE("quantile inverts the cdf") {
  for (double f : {0.7, 1.0, 2.0, 5.5, 12.0}) {
    for (double p : {1e-8, 0.001, 0.05, 0.5, 0.95, 0.999, 1 - 1e-9}) {
      const double q = chisq_quantile(p, f);
      if (p < 0.5) {
        CHECK(chisq_cdf(q, f) == doctest::Approx(p).epsilon(1e-9));
      } else {
        CHECK(chisq_sf(q, f) == doctest::Approx(1 - p).epsilon(1e-6));
      }
    }
  }
  CHECK(chisq_quantile(0.95, 1) == doctest::Approx(3.841458820694124).epsilon(1e-10));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(chisq_sf(-1.0, 2.0), ArgumentError);
  CHECK_THROWS_AS(chisq_sf(1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(chisq_sf(1.0, -3.0), ArgumentError);
  CHECK_THROWS_AS(chisq_sf(NAN, 2.0), ArgumentError);
  CHECK_THROWS_AS(gamma_q(0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(chisq_quantile(0.0, 2.0), ArgumentError);
  CHECK_THROWS_AS(chisq_quantile(1.0, 2.0), ArgumentError);
}
