#include <doctest.h>

#include <random>

#include "uevt/caviar.hpp"
#include "uevt/synthetic.hpp"

using namespace uevt;

namespace {

double tick_loss(std::span<const double> x, double q, double theta) {
  double s = 0.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    const double e = x[t] - q;
    s += (theta - (e < 0.0)) * e;
  }
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST_CASE("caviar path recursion") {
  CaviarParams c;
  c.beta = {-0.001, 0.9, 0.1, -0.3};
  const std::vector<double> x{0.01, -0.02, 0.0};
  const auto q = caviar_path(c, x, -0.02);
  REQUIRE(q.size() == 4);
  CHECK(q[1] == doctest::Approx(-0.001 + 0.9 * -0.02 + 0.1 * 0.01));
  CHECK(q[2] == doctest::Approx(-0.001 + 0.9 * q[1] - 0.3 * 0.02));
  CHECK(q[3] == doctest::Approx(-0.001 + 0.9 * q[2]));
  CHECK(pos_part(-1.0) == 0.0);
  CHECK(neg_part(-1.0) == 1.0);
}

TEST_CASE("caviar constant model reaches the grid optimum") {
  std::mt19937_64 rng(1);
  std::student_t_distribution<double> t(4.0);
  std::vector<double> x(500);
  for (auto& v : x) v = 0.01 * t(rng);
  const auto fit = fit_caviar_asymmetric(x, 0.95, 7, true);
  const double h = 1e-5;
  double best = INFINITY, arg = 0.0;
  for (double q = -0.06; q <= 0.0; q += h) {
    const double l = tick_loss(x, q, 0.05);
    if (l < best) {
      best = l;
      arg = q;
    }
  }
  CHECK(fit.loss <= best + 1e-12);
  CHECK(std::abs(fit.params.beta[0] - arg) <= h);
  CaviarParams c;
  c.beta = {arg, 0.0, 0.0, 0.0};
  CHECK(caviar_loss(c, x, 0.05, fit.q0) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("caviar full model beats its starting point and is deterministic") {
  const auto sim = simulate_garch_t(600, GarchSimParams{}, 2);
  const auto x = sim.returns.values();
  const auto a = fit_caviar_asymmetric(x, 0.95, 3);
  const auto b = fit_caviar_asymmetric(x, 0.95, 3);
  CHECK(a.params.beta == b.params.beta);
  CaviarParams start;
  start.beta = {0.1 * a.q0, 0.9, 0.0, -0.2};
  CHECK(a.loss <= caviar_loss(start, x, 0.05, a.q0));
  CHECK(std::abs(a.params.beta[1]) < 1.0);
  CHECK(a.loss >= 0.0);

  const auto v = var_caviar(sim.returns, 500, 25, 0.95, 11);
  CHECK(v.size() == 100);
  CHECK(v.dates.front() == sim.returns.date(500));
  // Fraction of violations is in a sane range.
  std::size_t viol = 0;
  for (std::size_t i = 0; i < v.size(); ++i) viol += sim.returns[500 + i] < -v.var_loss[i];
  CHECK(viol < 20);
}
