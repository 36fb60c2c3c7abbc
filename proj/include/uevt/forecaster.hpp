#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uevt/ambiguity.hpp"
#include "uevt/brt.hpp"
#include "uevt/gpd.hpp"
#include "uevt/timeseries.hpp"

namespace uevt {

/// OLS fit of BRT_t = b0 + b1 * variance + b2 * ambiguity.
struct RegressionFit {
  std::array<double, 3> beta{};
  std::array<double, 3> stderrs{};
  double r_squared = 0.0;
  std::size_t n_obs = 0;
};

inline constexpr std::size_t kMinRegressionRows = 30;

RegressionFit fit_brt_regression(std::span<const double> brt,
                                 std::span<const double> variance,
                                 std::span<const double> ambiguity);

/// Residuals y - X b of a fit, for diagnostics.
std::vector<double> regression_residuals(const RegressionFit& fit,
                                         std::span<const double> brt,
                                         std::span<const double> variance,
                                         std::span<const double> ambiguity);

struct BrtPrediction {
  double brt_hat = 0.0;
  bool clamped = false;
};

/// Predicted thresholds at or above zero are clamped to this value.
inline constexpr double kBrtClamp = -1e-6;

BrtPrediction predict_brt(const RegressionFit& fit, double variance,
                          double ambiguity);

enum ForecastFlag : unsigned {
  kFlagNone = 0,
  kFlagClamped = 1u << 0,          // predicted threshold was >= 0
  kFlagRelaxed = 1u << 1,          // threshold moved towards zero for n_u
  kFlagStaleAmbiguity = 1u << 2,   // previous month missing, older used
};
std::string format_flags(unsigned flags);

struct VarForecast {
  Date date;
  double brt_hat = 0.0;    // predicted threshold (signed return)
  double threshold = 0.0;  // threshold actually used (after relaxation)
  TailFit gpd;
  double var_loss = 0.0;
  double var_return = 0.0;
  unsigned flags = kFlagNone;
  std::size_t window_start = 0;
};

/// Uncertain-EVT VaR: refit the GPD on `evt_window` at the predicted
/// threshold and apply the POT VaR formula. If fewer than kMinExceedances
/// returns lie below brt_hat, the threshold is relaxed towards zero to the
/// nearest return that leaves enough exceedances.
VarForecast uncertain_evt_var(std::span<const double> evt_window,
                              double brt_hat, double p);

struct PipelineConfig {
  WindowSpec spec;
  BrtTarget target = BrtTarget::forward(50);
  double p = 0.95;
  Exec exec = Exec::parallel;
};

struct WindowReport {
  std::size_t window_start = 0;
  bool ok = false;
  std::string message;
  RegressionFit fit;
};

struct PipelineResult {
  std::vector<VarForecast> forecasts;
  std::vector<WindowReport> windows;
  BrtSeries realized;
  AmbiguitySeries ambiguity;
};

/// Rolling Uncertain-EVT protocol. For each training window [T, T+train)
/// the realized BRT on the regression span is regressed on the lagged
/// rolling variance and the previous month's ambiguity; the fit then
/// predicts the threshold for each day of the following forecast block.
/// A forecast dated d uses only daily data before d and intraday data from
/// months before d's month.
PipelineResult run_pipeline(const ReturnSeries& daily,
                            const IntradayPanel& panel,
                            const PipelineConfig& config);

}  // namespace uevt
