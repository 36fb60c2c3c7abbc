#include "uevt/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "uevt/csv_io.hpp"
#include "uevt/seed.hpp"

namespace uevt {

namespace {

bool weekday(Date d) {
  const std::chrono::weekday w{std::chrono::sys_days{d}};
  return w != std::chrono::Saturday && w != std::chrono::Sunday;
}

Date previous_weekday(Date d) {
  auto s = std::chrono::sys_days{d};
  do {
    s -= std::chrono::days{1};
  } while (!weekday(Date{s}));
  return Date{s};
}

// Unit-variance innovation.
double draw_innovation(std::mt19937_64& rng, double dof) {
  if (!std::isfinite(dof)) return std::normal_distribution<double>{}(rng);
  std::student_t_distribution<double> t{dof};
  return t(rng) * std::sqrt((dof - 2.0) / dof);
}

}  // namespace

std::vector<Date> trading_dates(std::size_t n, Date start) {
  std::vector<Date> out;
  out.reserve(n);
  auto s = std::chrono::sys_days{start};
  while (out.size() < n) {
    if (weekday(Date{s})) out.push_back(Date{s});
    s += std::chrono::days{1};
  }
  return out;
}

SyntheticDaily from_returns(const std::vector<Date>& dates,
                            const std::vector<double>& returns,
                            std::vector<double> sigma, double p0) {
  std::vector<Date> pd;
  pd.reserve(dates.size() + 1);
  pd.push_back(previous_weekday(dates.front()));
  pd.insert(pd.end(), dates.begin(), dates.end());
  std::vector<double> px(returns.size() + 1);
  px[0] = p0;
  double logp = std::log(p0);
  for (std::size_t i = 0; i < returns.size(); ++i) {
    logp += returns[i];
    px[i + 1] = std::exp(logp);
  }
  SyntheticDaily out;
  out.prices = PriceSeries(std::move(pd), std::move(px));
  // Keep the exact simulated returns rather than log(p_t / p_{t-1}).
  out.returns = ReturnSeries(dates, returns);
  out.sigma = std::move(sigma);
  return out;
}

SyntheticDaily simulate_garch_t(std::size_t n, const GarchSimParams& params,
                                std::uint64_t seed) {
  if (params.alpha + params.beta >= 1.0) {
    throw std::invalid_argument("simulate_garch_t: non-stationary parameters");
  }
  std::mt19937_64 rng(derive_seed(seed, "garch_sim", 0));
  std::vector<double> r(n), sig(n);
  double h = params.omega / (1.0 - params.alpha - params.beta);
  double eps = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) h = params.omega + params.alpha * eps * eps + params.beta * h;
    sig[t] = std::sqrt(h);
    eps = sig[t] * draw_innovation(rng, params.dof);
    r[t] = params.mu + eps;
  }
  return from_returns(trading_dates(n), r, std::move(sig));
}

SyntheticDaily simulate_regime_shift(std::size_t n, std::size_t shift_at,
                                     double sigma, double factor, double dof,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, "regime_sim", 0));
  std::vector<double> r(n), sig(n);
  for (std::size_t t = 0; t < n; ++t) {
    sig[t] = t < shift_at ? sigma : sigma * std::sqrt(factor);
    r[t] = sig[t] * draw_innovation(rng, dof);
  }
  return from_returns(trading_dates(n), r, std::move(sig));
}

IntradayPanel simulate_intraday(const SyntheticDaily& daily, std::size_t bars,
                                std::uint64_t seed, double dispersion) {
  if (bars < 2) throw std::invalid_argument("simulate_intraday: bars < 2");
  std::vector<IntradayDay> days;
  days.reserve(daily.returns.size());
  std::normal_distribution<double> z;
  const double nb = static_cast<double>(bars);
  for (std::size_t t = 0; t < daily.returns.size(); ++t) {
    std::mt19937_64 rng(derive_seed(seed, "intraday", t));
    const double scale =
        daily.sigma[t] / std::sqrt(nb) * std::exp(dispersion * z(rng));
    std::vector<double> x(bars);
    double sum = 0.0;
    for (auto& v : x) {
      v = scale * z(rng);
      sum += v;
    }
    // Bridge: remove the sample drift, add the daily return evenly.
    const double shift = (daily.returns[t] - sum) / nb;
    for (auto& v : x) v += shift;
    days.push_back({daily.returns.date(t), std::move(x)});
  }
  return IntradayPanel(std::move(days));
}

void write_daily_csv(const std::filesystem::path& path,
                     const PriceSeries& prices) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  CsvWriter w(out, {"date", "close"});
  for (std::size_t i = 0; i < prices.size(); ++i) {
    w << format_date(prices.date(i)) << prices[i];
    w.end_row();
  }
}

void write_intraday_csv(const std::filesystem::path& path,
                        const IntradayPanel& panel) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  CsvWriter w(out, {"date", "time", "return"});
  for (const auto& day : panel.days()) {
    const auto ds = format_date(day.date);
    for (std::size_t k = 0; k < day.returns.size(); ++k) {
      const std::size_t minutes = 9 * 60 + 30 + 5 * (k + 1);
      char buf[8];
      std::snprintf(buf, sizeof buf, "%02zu:%02zu", minutes / 60 % 24,
                    minutes % 60);
      w << ds << std::string(buf) << day.returns[k];
      w.end_row();
    }
  }
}

}  // namespace uevt
