#include <doctest.h>

#include <algorithm>
#include <random>

#include "uevt/benchmarks.hpp"
#include "uevt/gpd.hpp"
#include "uevt/synthetic.hpp"

using namespace uevt;

namespace {

ReturnSeries normal_series(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> r(n);
  for (auto& v : r) v = z(rng);
  return ReturnSeries(trading_dates(n), r);
}

// Sorted-order-statistic form of the type-7 quantile.
double oracle_quantile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const double h = (x.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - lo) * (x[hi] - x[lo]);
}

}  // namespace

TEST_CASE("variance-covariance VaR") {
  CHECK(std::abs(var_covar(0.01, 0.95) - 0.016449) < 1e-6);
  CHECK(var_covar(0.02, 0.99) == doctest::Approx(2.0 * var_covar(0.01, 0.99)));
  const auto r = normal_series(300, 0.01, 1);
  const auto v = var_variance_covariance(r, 250, 0.95);
  REQUIRE(v.size() == 50);
  CHECK(v.dates.front() == r.date(250));
  const auto w = r.values().subspan(0, 250);
  CHECK(v.var_loss[0] == doctest::Approx(var_covar(std::sqrt(sample_variance(w)), 0.95)));
}

TEST_CASE("historical simulation VaR uses only the trailing window") {
  const auto r = normal_series(400, 0.01, 2);
  const auto v = var_historical(r, 250, 0.95);
  REQUIRE(v.size() == 150);
  for (std::size_t i = 0; i < v.size(); i += 13) {
    const auto t = 250 + i;
    std::vector<double> w(r.values().begin() + (t - 250), r.values().begin() + t);
    CHECK(v.dates[i] == r.date(t));
    CHECK(v.var_loss[i] == doctest::Approx(-oracle_quantile(w, 0.05)).epsilon(1e-14));
    CHECK(v.var_return(i) == -v.var_loss[i]);
  }
  CHECK_THROWS_AS(var_historical(r, 401, 0.95), std::invalid_argument);
}

TEST_CASE("GBM Monte Carlo VaR") {
  // Window with mean exactly 0 and sd exactly 0.01.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::vector<double> w(250);
  for (auto& v : w) v = z(rng);
  const double m = sample_mean(w);
  for (auto& v : w) v -= m;
  const double s = std::sqrt(sample_variance(w));
  for (auto& v : w) v *= 0.01 / s;
  const double mc = mc_gbm_var(w, 0.95, 100000, 42);
  CHECK(std::abs(mc / var_covar(0.01, 0.95) - 1.0) < 0.02);
  CHECK(mc_gbm_var(w, 0.95, 5000, 1) == mc_gbm_var(w, 0.95, 5000, 1));
  CHECK(mc_gbm_var(w, 0.95, 5000, 1) != mc_gbm_var(w, 0.95, 5000, 2));
  CHECK_THROWS_AS(mc_gbm_var(w, 0.95, 999, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_gbm_var(std::vector<double>(50, 0.001), 0.95, 1000, 1), FitError);

  const auto r = normal_series(280, 0.01, 4);
  const auto a = var_monte_carlo_gbm(r, 250, 0.95, 2000, 9);
  const auto b = var_monte_carlo_gbm(r, 250, 0.95, 2000, 9);
  CHECK(a.var_loss == b.var_loss);
  CHECK(a.size() == 30);
}

TEST_CASE("plain EVT VaR uses the 95th-percentile loss threshold") {
  const auto sim = simulate_garch_t(700, GarchSimParams{}, 5);
  const auto w = sim.returns.values().subspan(0, 600);
  std::vector<double> losses(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) losses[i] = -w[i];
  const double u = oracle_quantile(losses, 0.95);
  const auto fit = fit_tail(losses, u);
  CHECK(plain_evt_var(w, 0.95) == doctest::Approx(evt_var(fit, 0.95)).epsilon(1e-12));
  CHECK(fit.n_u == 30);
  // At p equal to the percentile the VaR is the threshold itself.
  CHECK(plain_evt_var(w, 0.95, 0.95) > 0.0);
  const auto v = var_plain_evt(sim.returns, 600, 0.99);
  CHECK(v.size() == 100);
  CHECK(v.dates.front() == sim.returns.date(600));
  CHECK_THROWS_AS(var_plain_evt(sim.returns, 99, 0.99), std::invalid_argument);
}
