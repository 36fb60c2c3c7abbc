#include "uevt/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>

namespace uevt {

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

Date parse_date(std::string_view iso) {
  unsigned y = 0, m = 0, d = 0;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
      !parse_uint(iso.substr(0, 4), y) || !parse_uint(iso.substr(5, 2), m) ||
      !parse_uint(iso.substr(8, 2), d)) {
    throw DataError("invalid ISO-8601 date '" + std::string(iso) + "'");
  }
  Date date{std::chrono::year{static_cast<int>(y)}, std::chrono::month{m},
            std::chrono::day{d}};
  if (!date.ok()) {
    throw DataError("invalid calendar date '" + std::string(iso) + "'");
  }
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

Month month_of(Date d) {
  return {static_cast<int>(d.year()), static_cast<unsigned>(d.month())};
}

Month previous_month(Month m) {
  if (m.month == 1) return {m.year - 1, 12};
  return {m.year, m.month - 1};
}

std::string format_month(Month m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", m.year, m.month);
  return buf;
}

IntradayPanel::IntradayPanel(std::vector<IntradayDay> days)
    : days_(std::move(days)) {
  for (std::size_t i = 1; i < days_.size(); ++i) {
    if (!(days_[i - 1].date < days_[i].date)) {
      throw DataError("intraday panel: days not strictly increasing at " +
                      format_date(days_[i].date));
    }
  }
  for (const auto& day : days_) {
    for (double r : day.returns) {
      if (!std::isfinite(r)) {
        throw DataError("intraday panel: non-finite return on " +
                        format_date(day.date));
      }
    }
  }
}

void WindowSpec::validate() const {
  if (train_len == 0 || evt_len == 0 || hist_len == 0 || forecast_len == 0 ||
      lag == 0) {
    throw std::invalid_argument("window spec: all lengths must be positive");
  }
  if (evt_len + hist_len >= train_len) {
    throw std::invalid_argument(
        "window spec: evt_len + hist_len must be below train_len");
  }
}

std::vector<std::size_t> window_starts(std::size_t n, const WindowSpec& spec) {
  spec.validate();
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t + spec.train_len < n; t += spec.forecast_len) {
    out.push_back(t);
  }
  return out;
}

ReturnSeries compute_returns(const PriceSeries& prices, ReturnKind kind) {
  if (prices.size() < 2) {
    throw DataError("compute_returns: need at least two prices");
  }
  std::vector<Date> dates(prices.dates().begin() + 1, prices.dates().end());
  std::vector<double> r(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    const double prev = prices[i - 1];
    const double cur = prices[i];
    r[i - 1] = kind == ReturnKind::log ? std::log(cur / prev)
                                       : (cur - prev) / prev;
  }
  return ReturnSeries(std::move(dates), std::move(r));
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("sample_mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) /
         static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) {
    throw std::invalid_argument("sample_variance: need at least two points");
  }
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<double> rolling_variance(std::span<const double> values,
                                     std::size_t window, Exec exec) {
  if (window < 2) {
    throw std::invalid_argument("rolling_variance: window must be >= 2");
  }
  if (window > values.size()) return {};
  const std::size_t count = values.size() - window + 1;
  std::vector<double> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      out[k] = sample_variance(values.subspan(k, window));
    }
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      out[k] = sample_variance(values.subspan(k, window));
    }
  }
  return out;
}

ValueSeries rolling_variance(const ReturnSeries& returns, std::size_t window,
                             Exec exec) {
  auto v = rolling_variance(returns.values(), window, exec);
  if (v.empty()) return {};
  std::vector<Date> dates(returns.dates().begin() + (window - 1),
                          returns.dates().end());
  return ValueSeries(std::move(dates), std::move(v));
}

double empirical_quantile(std::span<const double> sample, double q) {
  if (sample.empty()) {
    throw std::invalid_argument("empirical_quantile: empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("empirical_quantile: q must lie in [0,1]");
  }
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double h = static_cast<double>(s.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= s.size()) return s.back();
  const double frac = h - static_cast<double>(lo);
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

}  // namespace uevt
