#include "uevt/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "uevt/special.hpp"

namespace uevt {

namespace {

// x * ln(y) with the 0 * ln 0 := 0 convention.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

TestResult chi2_result(double stat, double dof) {
  TestResult r;
  r.statistic = std::max(stat, 0.0);
  r.p_value = chi2_sf(r.statistic, dof);
  r.distribution = "chi2(" + std::to_string(static_cast<int>(dof)) + ")";
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

}  // namespace

std::size_t ViolationSeries::violations() const {
  return static_cast<std::size_t>(
      std::count(violated.begin(), violated.end(), true));
}

ViolationSeries make_violation_series(std::vector<Date> dates,
                                      std::vector<bool> violated) {
  if (dates.size() != violated.size()) {
    throw DataError("violation series: dates and flags differ in length");
  }
  ViolationSeries v;
  v.dates = std::move(dates);
  v.violated = std::move(violated);
  for (std::size_t t = 1; t < v.violated.size(); ++t) {
    const bool a = v.violated[t - 1];
    const bool b = v.violated[t];
    if (!a && !b) ++v.n00;
    if (!a && b) ++v.n01;
    if (a && !b) ++v.n10;
    if (a && b) ++v.n11;
  }
  return v;
}

ViolationSeries violations(const ReturnSeries& returns, const VarSeries& var) {
  if (var.dates.size() != var.var_loss.size()) {
    throw DataError("violations: VaR dates and values differ in length");
  }
  std::vector<bool> flags;
  flags.reserve(var.size());
  const auto dates = returns.dates();
  for (std::size_t i = 0; i < var.size(); ++i) {
    const auto it = std::lower_bound(dates.begin(), dates.end(), var.dates[i]);
    if (it == dates.end() || *it != var.dates[i]) {
      throw DataError("violations: no return dated " +
                      format_date(var.dates[i]));
    }
    const double r = returns[static_cast<std::size_t>(it - dates.begin())];
    flags.push_back(r < -var.var_loss[i]);
  }
  return make_violation_series(var.dates, std::move(flags));
}

TestResult kupiec_test(std::size_t x, std::size_t T, double rate) {
  if (T == 0 || x > T) throw std::invalid_argument("kupiec_test: need 0 <= x <= T, T > 0");
  if (!(rate > 0.0 && rate < 1.0)) {
    throw std::invalid_argument("kupiec_test: rate outside (0,1)");
  }
  const double n = static_cast<double>(T);
  const double k = static_cast<double>(x);
  const double phat = k / n;
  const double ll0 = xlogy(n - k, 1.0 - rate) + xlogy(k, rate);
  const double ll1 = xlogy(n - k, 1.0 - phat) + xlogy(k, phat);
  return chi2_result(-2.0 * (ll0 - ll1), 1.0);
}

double christoffersen_independence_lr(const ViolationSeries& v) {
  const double n00 = static_cast<double>(v.n00);
  const double n01 = static_cast<double>(v.n01);
  const double n10 = static_cast<double>(v.n10);
  const double n11 = static_cast<double>(v.n11);
  const double total = n00 + n01 + n10 + n11;
  if (total == 0.0) return 0.0;
  const double pi = (n01 + n11) / total;
  const double pi0 = n00 + n01 > 0.0 ? n01 / (n00 + n01) : 0.0;
  const double pi1 = n10 + n11 > 0.0 ? n11 / (n10 + n11) : 0.0;
  const double ll_null = xlogy(n00 + n10, 1.0 - pi) + xlogy(n01 + n11, pi);
  const double ll_alt = xlogy(n00, 1.0 - pi0) + xlogy(n01, pi0) +
                        xlogy(n10, 1.0 - pi1) + xlogy(n11, pi1);
  return std::max(0.0, -2.0 * (ll_null - ll_alt));
}

TestResult christoffersen_test(const ViolationSeries& v, double rate) {
  if (v.size() < 2) {
    throw std::invalid_argument("christoffersen_test: need T >= 2");
  }
  const auto uc = kupiec_test(v.violations(), v.size(), rate);
  return chi2_result(christoffersen_independence_lr(v) + uc.statistic, 2.0);
}

DmResult diebold_mariano(std::span<const double> errors_a,
                         std::span<const double> errors_b) {
  if (errors_a.size() != errors_b.size()) {
    throw DataError("diebold_mariano: series differ in length");
  }
  if (errors_a.empty()) throw DataError("diebold_mariano: empty series");
  DmResult r;
  r.n = errors_a.size();
  for (std::size_t t = 0; t < r.n; ++t) {
    const double d = errors_a[t] * errors_a[t] - errors_b[t] * errors_b[t];
    if (d > 0.0) ++r.s2;
  }
  const double T = static_cast<double>(r.n);
  r.s2a = (static_cast<double>(r.s2) - 0.5 * T) / std::sqrt(0.25 * T);
  r.statistic = r.s2a;
  if (r.n >= 30) {
    r.p_value = std::min(1.0, 2.0 * normal_cdf(-std::abs(r.s2a)));
    r.distribution = "normal";
  } else {
    r.p_value = binomial_half_two_sided(r.s2, r.n);
    r.distribution = "binomial";
  }
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

ErrorSeries forecast_errors(const VarSeries& var, const ReturnSeries& returns,
                            const BrtTarget& target, double p) {
  ErrorSeries out;
  const auto dates = returns.dates();
  for (std::size_t i = 0; i < var.size(); ++i) {
    const auto it = std::lower_bound(dates.begin(), dates.end(), var.dates[i]);
    if (it == dates.end() || *it != var.dates[i]) {
      throw DataError("forecast_errors: no return dated " +
                      format_date(var.dates[i]));
    }
    const auto d = static_cast<std::size_t>(it - dates.begin());
    double realized;
    if (target.kind == BrtTarget::Kind::next_day) {
      realized = returns[d];
    } else {
      if (d + target.horizon > returns.size()) continue;
      realized = empirical_quantile(returns.values().subspan(d, target.horizon),
                                    1.0 - p);
    }
    out.dates.push_back(var.dates[i]);
    out.errors.push_back(var.var_return(i) - realized);
  }
  return out;
}

DmMatrix dm_matrix(const std::vector<ErrorSeries>& errors,
                   const std::vector<std::string>& models) {
  if (errors.size() != models.size()) {
    throw std::invalid_argument("dm_matrix: models and series differ in count");
  }
  DmMatrix m;
  m.models = models;
  const std::size_t k = errors.size();
  m.s2a.assign(k, std::vector<double>(k, 0.0));
  m.p_value.assign(k, std::vector<double>(k, 1.0));
  if (k == 0) return m;

  std::set<Date> common(errors[0].dates.begin(), errors[0].dates.end());
  for (std::size_t i = 1; i < k; ++i) {
    std::set<Date> next;
    for (const auto& d : errors[i].dates) {
      if (common.count(d)) next.insert(d);
    }
    common = std::move(next);
  }
  m.common_days = common.size();
  std::vector<std::vector<double>> aligned(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t t = 0; t < errors[i].dates.size(); ++t) {
      if (common.count(errors[i].dates[t])) {
        aligned[i].push_back(errors[i].errors[t]);
      }
    }
  }
  if (common.empty()) {
    if (k > 1) throw DataError("dm_matrix: models share no forecast dates");
    return m;
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto r = diebold_mariano(aligned[i], aligned[j]);
      m.s2a[i][j] = r.s2a;
      m.p_value[i][j] = r.p_value;
    }
  }
  return m;
}

}  // namespace uevt
