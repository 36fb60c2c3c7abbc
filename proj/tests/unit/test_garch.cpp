#include <doctest.h>

#include <random>

#include "uevt/garch.hpp"
#include "uevt/special.hpp"
#include "uevt/synthetic.hpp"

using namespace uevt;

TEST_CASE("garch variance recursion and likelihood by hand") {
  GarchParams g;
  g.mu = 0.001;
  g.alpha0 = 1e-5;
  g.alpha = {0.1, 0.05};
  g.beta = {0.8};
  const std::vector<double> r{0.01, -0.02, 0.005, 0.0, 0.03};
  const double bc = 2e-4;
  const auto h = garch_variances(g, r, bc);
  REQUIRE(h.size() == r.size() + 1);
  const auto e2 = [&](int i) { return i < 0 ? bc : (r[i] - g.mu) * (r[i] - g.mu); };
  double prev = bc;
  double ll = 0.0;
  for (int t = 0; t <= 5; ++t) {
    const double want = 1e-5 + 0.1 * e2(t - 1) + 0.05 * e2(t - 2) + 0.8 * prev;
    CHECK(h[t] == doctest::Approx(want).epsilon(1e-14));
    if (t < 5) {
      const double e = r[t] - g.mu;
      ll += std::log(normal_pdf(e / std::sqrt(h[t])) / std::sqrt(h[t]));
    }
    prev = h[t];
  }
  CHECK(garch_loglik(g, r, bc) == doctest::Approx(ll).epsilon(1e-12));
  CHECK(g.persistence() == doctest::Approx(0.95));
}

TEST_CASE("standardised t innovations") {
  // Unit variance: quantile scaled by sqrt((v-2)/v).
  CHECK(innovation_quantile(Innovation::student_t, 5.0, 0.05) ==
        doctest::Approx(student_t_quantile(0.05, 5.0) * std::sqrt(0.6)));
  CHECK(innovation_quantile(Innovation::normal, 0.0, 0.05) ==
        doctest::Approx(-1.6448536269514722));
  // Density integrates to one (trapezoid on a wide grid).
  double s = 0.0;
  const double h = 1e-3;
  for (double x = -60.0; x <= 60.0; x += h) {
    s += std::exp(innovation_logpdf(Innovation::student_t, 5.0, x, 1.0)) * h;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("garch fit recovers a simulated process") {
  GarchSimParams truth;
  truth.dof = INFINITY;
  truth.alpha = 0.1;
  truth.beta = 0.85;
  truth.omega = 5e-6;
  const auto sim = simulate_garch_t(4000, truth, 12);
  const auto fit = fit_garch(sim.returns.values());
  CHECK(fit.params.alpha[0] == doctest::Approx(0.1).epsilon(0.35));
  CHECK(fit.params.beta[0] == doctest::Approx(0.85).epsilon(0.06));
  CHECK(fit.params.persistence() < 1.0);
  CHECK(fit.params.alpha0 > 0.0);
  // The optimum beats the truth on its own likelihood.
  GarchParams t = fit.params;
  t.alpha = {0.1};
  t.beta = {0.85};
  t.alpha0 = 5e-6;
  CHECK(fit.loglik >= garch_loglik(t, sim.returns.values(), fit.backcast) - 1e-6);

  const auto tfit = fit_garch(simulate_garch_t(3000, GarchSimParams{}, 3).returns.values(),
                              1, 1, Innovation::student_t);
  CHECK(tfit.params.dof > 2.0);
  CHECK(tfit.params.dof < 15.0);
  CHECK_THROWS_AS(fit_garch(std::vector<double>(100, 0.01)), FitError);
}

TEST_CASE("egarch normalisation and recursion") {
  const auto sim = simulate_garch_t(1500, GarchSimParams{}, 8);
  const auto fit = fit_egarch(sim.returns.values());
  CHECK(fit.params.beta.size() == 1);
  CHECK(fit.params.beta[0] == 1.0);
  CHECK(std::abs(fit.params.alpha[0]) < 1.0);
  // Recompute the log variances by hand from the fitted parameters.
  const auto& e = fit.params;
  const auto r = sim.returns.values();
  const auto lv = egarch_log_variances(e, r, fit.backcast);
  double prev = std::log(fit.backcast);
  double gprev = 0.0;
  for (std::size_t t = 0; t < 50; ++t) {
    const double want = e.omega + (t > 0 ? gprev : 0.0) + e.alpha[0] * prev;
    CHECK(lv[t] == doctest::Approx(want).epsilon(1e-12));
    const double z = (r[t] - e.mu) / std::exp(0.5 * lv[t]);
    gprev = e.theta * z + e.lambda * (std::abs(z) - std::sqrt(2.0 / M_PI));
    prev = lv[t];
  }
}

TEST_CASE("rolling volatility VaR dates and look-ahead") {
  const auto sim = simulate_garch_t(700, GarchSimParams{}, 6);
  const auto v = var_garch(sim.returns, 600, 25, 0.95);
  REQUIRE(v.size() == 100);
  CHECK(v.dates.front() == sim.returns.date(600));
  // Changing the return on date 650 cannot move forecasts dated <= 650.
  auto vals = std::vector<double>(sim.returns.values().begin(), sim.returns.values().end());
  vals[650] *= 5.0;
  const ReturnSeries bumped(std::vector<Date>(sim.returns.dates().begin(),
                                              sim.returns.dates().end()), vals);
  const auto w = var_garch(bumped, 600, 25, 0.95);
  for (std::size_t i = 0; i <= 50; ++i) CHECK(w.var_loss[i] == v.var_loss[i]);
  CHECK(w.var_loss[51] != v.var_loss[51]);
  const auto e = var_egarch(sim.returns, 600, 50, 0.95);
  CHECK(e.size() == 100);
  CHECK_THROWS_AS(var_garch(sim.returns, 200, 25, 0.95), std::invalid_argument);
}
