#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uevt/timeseries.hpp"

namespace uevt {

/// One-day-ahead VaR forecasts in loss units. The entry dated d was formed
/// from returns strictly before d.
struct VarSeries {
  std::string model;
  std::vector<Date> dates;
  std::vector<double> var_loss;

  std::size_t size() const { return dates.size(); }
  double var_return(std::size_t i) const { return -var_loss[i]; }
};

/// Empirical (1 - p) quantile of the trailing window, negated.
VarSeries var_historical(const ReturnSeries& returns, std::size_t window,
                         double p);

/// z_p * sigma.
double var_covar(double sigma, double p);
VarSeries var_variance_covariance(const ReturnSeries& returns,
                                  std::size_t window, double p);

/// One-day GBM Monte Carlo VaR calibrated on `window`: log-return drift and
/// diffusion estimated from the window, terminal log returns simulated and
/// their empirical (1 - p) quantile negated.
double mc_gbm_var(std::span<const double> window, double p,
                  std::size_t n_paths, std::uint64_t seed);
VarSeries var_monte_carlo_gbm(const ReturnSeries& returns, std::size_t window,
                              double p, std::size_t n_paths,
                              std::uint64_t seed, Exec exec = Exec::parallel);

/// Fixed-threshold EVT: threshold at the `percentile` of the window's losses.
double plain_evt_var(std::span<const double> window, double p,
                     double percentile = 0.95);
VarSeries var_plain_evt(const ReturnSeries& returns, std::size_t window,
                        double p, double percentile = 0.95);

}  // namespace uevt
