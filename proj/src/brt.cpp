#include "uevt/brt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace uevt {

double historical_forward_var(const ReturnSeries& returns, std::size_t t,
                              std::size_t horizon, double p) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  if (t + horizon >= returns.size()) {
    throw DataError("historical_forward_var: need " + std::to_string(horizon) +
                    " returns after index " + std::to_string(t));
  }
  return -empirical_quantile(returns.values().subspan(t + 1, horizon), 1.0 - p);
}

double brt_target_value(const ReturnSeries& returns, std::size_t t,
                        const BrtTarget& target, double p) {
  if (target.kind == BrtTarget::Kind::next_day) {
    if (t + 1 >= returns.size()) {
      throw DataError("brt target: no return after index " + std::to_string(t));
    }
    return -returns[t + 1];
  }
  return historical_forward_var(returns, t, target.horizon, p);
}

BrtPoint realized_brt(const ReturnSeries& returns, std::size_t t,
                      std::size_t evt_window, const BrtTarget& target,
                      double p) {
  if (evt_window == 0 || t + 1 < evt_window || t >= returns.size()) {
    throw DataError("realized_brt: EVT window out of bounds at index " +
                    std::to_string(t));
  }
  const double tgt = brt_target_value(returns, t, target, p);
  const auto window = returns.values().subspan(t + 1 - evt_window, evt_window);

  // Distinct negative returns, closest to zero first so ties keep the
  // candidate with more exceedances.
  std::vector<double> sorted(window.begin(), window.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> candidates;
  for (std::size_t i = kMinExceedances; i < sorted.size(); ++i) {
    // sorted[i] has exactly i returns strictly below it when it differs
    // from its predecessor.
    if (sorted[i] >= 0.0) break;
    if (sorted[i] != sorted[i - 1]) candidates.push_back(sorted[i]);
  }
  std::reverse(candidates.begin(), candidates.end());

  std::optional<BrtPoint> best;
  std::size_t searched = 0;
  std::string last_error = "no negative candidate leaves " +
                           std::to_string(kMinExceedances) + " exceedances";
  for (double u : candidates) {
    EvtEstimate est;
    try {
      est = evt_var_at_threshold(window, u, p);
    } catch (const FitError& e) {
      last_error = e.what();
      continue;
    }
    ++searched;
    const double gap = std::abs(est.var_loss - tgt);
    if (!best || gap < best->objective_gap - kBrtTieTolerance) {
      best = BrtPoint{returns.date(t), u, gap, 0, tgt, est.var_loss, est.fit};
    }
  }
  if (!best) throw FitError("realized_brt: " + last_error);
  best->candidates_searched = searched;
  return *best;
}

BrtSeries realized_brt_range(const ReturnSeries& returns, std::size_t first,
                             std::size_t last, std::size_t evt_window,
                             const BrtTarget& target, double p, Exec exec) {
  BrtSeries out;
  if (last < first) return out;
  const std::size_t count = last - first + 1;
  std::vector<std::optional<BrtPoint>> points(count);
  std::vector<std::string> errors(count);

  const auto one = [&](std::size_t k) {
    try {
      points[k] = realized_brt(returns, first + k, evt_window, target, p);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  };
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  }

  for (std::size_t k = 0; k < count; ++k) {
    if (points[k]) {
      out.points.push_back(std::move(*points[k]));
    } else {
      out.gaps.push_back({returns.date(first + k), errors[k]});
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> regression_span(std::size_t T,
                                                    const WindowSpec& spec) {
  return {T + spec.evt_len, T + spec.train_len - spec.hist_len - 1};
}

BrtSeries brt_series(const ReturnSeries& returns, const WindowSpec& spec,
                     const BrtTarget& target, double p, Exec exec) {
  spec.validate();
  if (returns.size() < spec.train_len) {
    throw DataError("brt_series: need at least " +
                    std::to_string(spec.train_len) + " returns");
  }
  if (target.span() > spec.hist_len) {
    throw std::invalid_argument("brt_series: target horizon exceeds hist_len");
  }
  auto starts = window_starts(returns.size(), spec);
  if (starts.empty()) starts.push_back(0);  // exactly one training window
  // Regression spans of consecutive windows overlap and are contiguous, so
  // their union is a single index range.
  const std::size_t first = regression_span(starts.front(), spec).first;
  const std::size_t last = regression_span(starts.back(), spec).second;
  return realized_brt_range(returns, first, last, spec.evt_len, target, p,
                            exec);
}

}  // namespace uevt
