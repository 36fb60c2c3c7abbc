#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uevt/gpd.hpp"
#include "uevt/timeseries.hpp"

namespace uevt {

/// What the EVT VaR at the break-even threshold must match: the historical
/// VaR over the next `horizon` days, or the next day's return alone.
struct BrtTarget {
  enum class Kind { forward_historical, next_day };
  Kind kind = Kind::forward_historical;
  std::size_t horizon = 50;

  static BrtTarget forward(std::size_t horizon = 50) {
    return {Kind::forward_historical, horizon};
  }
  static BrtTarget next_day() { return {Kind::next_day, 1}; }
  /// Number of future observations the target consumes.
  std::size_t span() const { return kind == Kind::next_day ? 1 : horizon; }
};

struct BrtPoint {
  Date date;
  double brt = 0.0;            // signed return, < 0
  double objective_gap = 0.0;  // |VaR_EVT - target|
  std::size_t candidates_searched = 0;
  double target = 0.0;   // loss units
  double var_evt = 0.0;  // loss units
  TailFit fit;
};

struct BrtGap {
  Date date;
  std::string reason;
};

struct BrtSeries {
  std::vector<BrtPoint> points;
  std::vector<BrtGap> gaps;
};

/// Historical VaR (loss units) of returns (t, t + horizon], i.e. minus the
/// (1 - p) empirical quantile.
double historical_forward_var(const ReturnSeries& returns, std::size_t t,
                              std::size_t horizon, double p);

/// Target value in loss units for date index t.
double brt_target_value(const ReturnSeries& returns, std::size_t t,
                        const BrtTarget& target, double p);

/// Ties within this tolerance go to the candidate closest to zero.
inline constexpr double kBrtTieTolerance = 1e-12;

/// Realized break-even threshold at index t. Searches every distinct
/// negative return of the window [t - evt_window + 1, t] that leaves at
/// least kMinExceedances returns strictly below it.
BrtPoint realized_brt(const ReturnSeries& returns, std::size_t t,
                      std::size_t evt_window, const BrtTarget& target,
                      double p);

/// realized_brt for every t in [first, last]; failed dates become gaps.
BrtSeries realized_brt_range(const ReturnSeries& returns, std::size_t first,
                             std::size_t last, std::size_t evt_window,
                             const BrtTarget& target, double p,
                             Exec exec = Exec::parallel);

/// First and last index of the regression span of the window starting at T.
std::pair<std::size_t, std::size_t> regression_span(std::size_t T,
                                                    const WindowSpec& spec);

/// Realized BRT over the regression spans of every training window, one
/// entry per date.
BrtSeries brt_series(const ReturnSeries& returns, const WindowSpec& spec,
                     const BrtTarget& target, double p,
                     Exec exec = Exec::parallel);

}  // namespace uevt
