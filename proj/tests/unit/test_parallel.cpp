#include <doctest.h>

#include <cstring>

#include "uevt/benchmarks.hpp"
#include "uevt/brt.hpp"
#include "uevt/forecaster.hpp"
#include "uevt/synthetic.hpp"

using namespace uevt;

namespace {

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  const auto sim = simulate_garch_t(760, GarchSimParams{}, 31);
  const auto& r = sim.returns;

  const auto a = rolling_variance(r.values(), 21, Exec::serial);
  const auto b = rolling_variance(r.values(), 21, Exec::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(bits_equal(a[i], b[i]));

  for (const auto& target : {BrtTarget::forward(50), BrtTarget::next_day()}) {
    const auto s = realized_brt_range(r, 99, 300, 100, target, 0.95, Exec::serial);
    const auto p = realized_brt_range(r, 99, 300, 100, target, 0.95, Exec::parallel);
    REQUIRE(s.points.size() == p.points.size());
    CHECK(s.gaps.size() == p.gaps.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      CHECK(s.points[i].date == p.points[i].date);
      CHECK(bits_equal(s.points[i].brt, p.points[i].brt));
      CHECK(bits_equal(s.points[i].objective_gap, p.points[i].objective_gap));
    }
  }

  const auto ms = var_monte_carlo_gbm(r, 250, 0.95, 1000, 5, Exec::serial);
  const auto mp = var_monte_carlo_gbm(r, 250, 0.95, 1000, 5, Exec::parallel);
  REQUIRE(ms.size() == mp.size());
  for (std::size_t i = 0; i < ms.size(); ++i) CHECK(bits_equal(ms.var_loss[i], mp.var_loss[i]));

  const auto panel = simulate_intraday(sim, 30, 31);
  PipelineConfig cfg;
  cfg.exec = Exec::serial;
  const auto fs = run_pipeline(r, panel, cfg);
  cfg.exec = Exec::parallel;
  const auto fp = run_pipeline(r, panel, cfg);
  REQUIRE(fs.forecasts.size() == fp.forecasts.size());
  CHECK(fs.forecasts.size() == 160);
  for (std::size_t i = 0; i < fs.forecasts.size(); ++i) {
    CHECK(fs.forecasts[i].date == fp.forecasts[i].date);
    CHECK(bits_equal(fs.forecasts[i].var_loss, fp.forecasts[i].var_loss));
    CHECK(fs.forecasts[i].flags == fp.forecasts[i].flags);
  }
}
