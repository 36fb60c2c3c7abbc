#include <doctest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "uevt/special.hpp"

using namespace uevt;
namespace bm = boost::math;

TEST_CASE("normal functions against Boost") {
  const bm::normal_distribution<double> n;
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CHECK(normal_cdf(x) == doctest::Approx(bm::cdf(n, x)).epsilon(1e-12));
    CHECK(normal_pdf(x) == doctest::Approx(bm::pdf(n, x)).epsilon(1e-13));
  }
  for (double p : {1e-12, 1e-6, 0.01, 0.05, 0.3, 0.5, 0.8, 0.95, 0.999, 1 - 1e-9}) {
    CHECK(std::abs(normal_quantile(p) - bm::quantile(n, p)) < 1e-9);
  }
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
}

TEST_CASE("incomplete gamma and chi-square survival against Boost") {
  for (double a : {0.5, 1.0, 2.5, 10.0, 40.0}) {
    for (double x : {1e-3, 0.1, 0.9, 2.0, 5.0, 11.0, 30.0, 60.0}) {
      CHECK(std::abs(gamma_p(a, x) - bm::gamma_p(a, x)) < 1e-12);
      CHECK(std::abs(gamma_q(a, x) - bm::gamma_q(a, x)) < 1e-12);
    }
  }
  for (double k : {1.0, 2.0, 5.0}) {
    const bm::chi_squared_distribution<double> c(k);
    for (int i = 0; i < 50; ++i) {
      const double x = 0.05 + 0.4 * i;
      CHECK(std::abs(chi2_sf(x, k) - bm::cdf(bm::complement(c, x))) < 1e-10);
    }
  }
  CHECK(chi2_sf(0.0, 1.0) == 1.0);
}

TEST_CASE("incomplete beta and Student-t against Boost") {
  for (double a : {0.5, 2.0, 7.5}) {
    for (double b : {0.5, 3.0, 20.0}) {
      for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0}) {
        CHECK(std::abs(incomplete_beta(a, b, x) - bm::ibeta(a, b, x)) < 1e-11);
      }
    }
  }
  for (double dof : {2.5, 4.0, 5.0, 10.0, 60.0}) {
    const bm::students_t_distribution<double> t(dof);
    for (double x = -12.0; x <= 12.0; x += 0.7) {
      CHECK(std::abs(student_t_cdf(x, dof) - bm::cdf(t, x)) < 1e-11);
    }
    for (double p : {1e-6, 0.01, 0.05, 0.5, 0.9, 0.975}) {
      CHECK(student_t_quantile(p, dof) ==
            doctest::Approx(bm::quantile(t, p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("unit-variance t absolute mean") {
  // E|T| for a standard t_v is sqrt(v) Gamma((v-1)/2) / (sqrt(pi) Gamma(v/2)),
  // rescaled by sqrt((v-2)/v).
  for (double v : {3.0, 5.0, 8.0, 30.0}) {
    const double raw = std::sqrt(v) * bm::tgamma((v - 1) / 2) /
                       (std::sqrt(M_PI) * bm::tgamma(v / 2));
    CHECK(student_t_abs_mean(v) ==
          doctest::Approx(raw * std::sqrt((v - 2) / v)).epsilon(1e-12));
  }
  CHECK(student_t_abs_mean(1e6) == doctest::Approx(std::sqrt(2 / M_PI)).epsilon(1e-5));
}

TEST_CASE("exact two-sided binomial(1/2) test") {
  for (std::size_t n : {1u, 5u, 12u, 29u}) {
    const bm::binomial_distribution<double> b(static_cast<double>(n), 0.5);
    for (std::size_t k = 0; k <= n; ++k) {
      const double lower = bm::cdf(b, static_cast<double>(k));
      const double upper =
          k == 0 ? 1.0 : bm::cdf(bm::complement(b, static_cast<double>(k) - 1));
      const double oracle = std::min(1.0, 2.0 * std::min(lower, upper));
      CHECK(binomial_half_two_sided(k, n) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}
