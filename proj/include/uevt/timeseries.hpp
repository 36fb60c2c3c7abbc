#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uevt/errors.hpp"
#include "uevt/exec.hpp"

namespace uevt {

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view iso);
std::string format_date(Date d);

/// Calendar month key, e.g. 2008-10.
struct Month {
  int year = 0;
  unsigned month = 0;
  auto operator<=>(const Month&) const = default;
};
Month month_of(Date d);
Month previous_month(Month m);
std::string format_month(Month m);

struct PriceTag {
  static constexpr const char* name = "price";
  static bool admissible(double v) { return std::isfinite(v) && v > 0.0; }
};
struct ReturnTag {
  static constexpr const char* name = "return";
  static bool admissible(double v) { return std::isfinite(v); }
};
struct ValueTag {
  static constexpr const char* name = "value";
  static bool admissible(double v) { return std::isfinite(v); }
};

/// Dated observations with strictly increasing dates. The tag fixes which
/// values are admissible, so prices and returns cannot be mixed up.
template <class Tag>
class Series {
 public:
  Series() = default;
  Series(std::vector<Date> dates, std::vector<double> values)
      : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
      throw DataError("series: dates and values differ in length");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!Tag::admissible(values_[i])) {
        throw DataError(std::string("series: inadmissible ") + Tag::name +
                        " at " + format_date(dates_[i]));
      }
      if (i > 0 && !(dates_[i - 1] < dates_[i])) {
        throw DataError("series: dates not strictly increasing at " +
                        format_date(dates_[i]));
      }
    }
  }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  Date date(std::size_t i) const { return dates_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<const Date> dates() const { return dates_; }

  /// Half-open contiguous slice [start, start + length).
  Series slice(std::size_t start, std::size_t length) const {
    if (start > size() || length > size() - start) {
      throw std::out_of_range("slice: [" + std::to_string(start) + ", " +
                              std::to_string(start + length) +
                              ") outside series of length " +
                              std::to_string(size()));
    }
    Series out;
    out.dates_.assign(dates_.begin() + start, dates_.begin() + start + length);
    out.values_.assign(values_.begin() + start,
                       values_.begin() + start + length);
    return out;
  }

 private:
  std::vector<Date> dates_;
  std::vector<double> values_;
};

using PriceSeries = Series<PriceTag>;
using ReturnSeries = Series<ReturnTag>;
using ValueSeries = Series<ValueTag>;

template <class Tag>
Series<Tag> slice_window(const Series<Tag>& s, std::size_t start,
                         std::size_t length) {
  return s.slice(start, length);
}

struct IntradayDay {
  Date date;
  std::vector<double> returns;
};

/// Intraday returns grouped by trading day, days in increasing date order.
class IntradayPanel {
 public:
  IntradayPanel() = default;
  explicit IntradayPanel(std::vector<IntradayDay> days);

  const std::vector<IntradayDay>& days() const { return days_; }
  std::size_t size() const { return days_.size(); }
  bool empty() const { return days_.empty(); }

 private:
  std::vector<IntradayDay> days_;
};

/// Rolling-window protocol lengths, counted in trading days.
struct WindowSpec {
  std::size_t train_len = 600;
  std::size_t evt_len = 100;
  std::size_t hist_len = 50;
  std::size_t forecast_len = 25;
  std::size_t lag = 21;

  void validate() const;
  std::size_t regression_span() const {
    return train_len - evt_len - hist_len;
  }
};

/// Start indices T of the rolling training windows over a series of length
/// n: T = 0, forecast_len, 2 * forecast_len, ... while at least one
/// out-of-sample day T + train_len remains.
std::vector<std::size_t> window_starts(std::size_t n, const WindowSpec& spec);

enum class ReturnKind { log, simple };

ReturnSeries compute_returns(const PriceSeries& prices,
                             ReturnKind kind = ReturnKind::log);

/// Unbiased sample variance of each trailing window, dated at the window's
/// last observation. Dates without a full window are omitted.
ValueSeries rolling_variance(const ReturnSeries& returns, std::size_t window,
                             Exec exec = Exec::parallel);
std::vector<double> rolling_variance(std::span<const double> values,
                                     std::size_t window,
                                     Exec exec = Exec::parallel);

double sample_mean(std::span<const double> x);
/// Two-pass unbiased variance.
double sample_variance(std::span<const double> x);

/// Type-7 (linear interpolation between closest ranks) quantile.
double empirical_quantile(std::span<const double> sample, double q);

}  // namespace uevt
