#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "uevt/timeseries.hpp"

namespace uevt {

/// n weekdays starting at `start` (inclusive if it is a weekday).
std::vector<Date> trading_dates(std::size_t n,
                                Date start = Date{std::chrono::year{2005},
                                                  std::chrono::month{4},
                                                  std::chrono::day{1}});

struct GarchSimParams {
  double mu = 0.0;
  double omega = 2e-6;
  double alpha = 0.08;
  double beta = 0.9;
  double dof = 5.0;  // standardized t; inf gives normal innovations
};

struct SyntheticDaily {
  PriceSeries prices;         // n + 1 closes
  ReturnSeries returns;       // n log returns
  std::vector<double> sigma;  // true conditional sd of each return
};

/// Log returns r_t = mu + sigma_t z_t, sigma_t^2 = omega + alpha eps_{t-1}^2 +
/// beta sigma_{t-1}^2, started at the unconditional variance.
SyntheticDaily simulate_garch_t(std::size_t n, const GarchSimParams& params,
                                std::uint64_t seed);

/// Standardized-t returns whose sd jumps from `sigma` to sqrt(factor) *
/// sigma at index `shift_at`.
SyntheticDaily simulate_regime_shift(std::size_t n, std::size_t shift_at,
                                     double sigma, double factor, double dof,
                                     std::uint64_t seed);

/// Closes from log returns, first close `p0` dated one weekday earlier than
/// the first return.
SyntheticDaily from_returns(const std::vector<Date>& dates,
                            const std::vector<double>& returns,
                            std::vector<double> sigma, double p0 = 100.0);

/// `bars` intraday returns per day that add up exactly to the daily return.
/// Bars are Gaussian with sd sigma_t / sqrt(bars) scaled by a per-day
/// dispersion drawn from a lognormal with log-sd `dispersion`.
IntradayPanel simulate_intraday(const SyntheticDaily& daily, std::size_t bars,
                                std::uint64_t seed, double dispersion = 0.3);

void write_daily_csv(const std::filesystem::path& path,
                     const PriceSeries& prices);
/// date,time,return rows, 5-minute bars from 09:30.
void write_intraday_csv(const std::filesystem::path& path,
                        const IntradayPanel& panel);

}  // namespace uevt
