#pragma once

#include <cstddef>

namespace uevt {

double normal_pdf(double x);
double normal_cdf(double x);
/// Inverse standard normal CDF. Rational initial guess refined with one
/// Halley step; absolute error below 1e-9 on (1e-300, 1 - 1e-16).
double normal_quantile(double p);

/// Regularised lower/upper incomplete gamma P(a,x), Q(a,x). Series for
/// x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with k degrees of
/// freedom.
double chi2_sf(double x, double k);

/// Regularised incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);

/// E|Z| for a unit-variance Student-t with `dof` > 2 degrees of freedom.
double student_t_abs_mean(double dof);

/// Two-sided exact binomial p-value for observing `k` successes in `n`
/// Bernoulli(1/2) trials.
double binomial_half_two_sided(std::size_t k, std::size_t n);

}  // namespace uevt
