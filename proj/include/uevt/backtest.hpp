#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uevt/benchmarks.hpp"
#include "uevt/brt.hpp"
#include "uevt/timeseries.hpp"

namespace uevt {

struct ViolationSeries {
  std::vector<Date> dates;
  std::vector<bool> violated;
  // n_ij: transitions from state i on day t-1 to state j on day t.
  std::size_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

  std::size_t size() const { return violated.size(); }
  std::size_t violations() const;
};

ViolationSeries make_violation_series(std::vector<Date> dates,
                                      std::vector<bool> violated);

/// A violation on date d is r_d < -var_loss_d. Every VaR date must exist in
/// the return series.
ViolationSeries violations(const ReturnSeries& returns, const VarSeries& var);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::string distribution;  // e.g. "chi2(1)", "normal", "binomial"
  bool reject_at_5pct = false;
};

/// Kupiec unconditional coverage LR with x violations in T days and
/// expected violation rate `rate` (1 - confidence).
TestResult kupiec_test(std::size_t x, std::size_t T, double rate);

/// Christoffersen conditional coverage: independence LR plus Kupiec LR,
/// chi2(2).
TestResult christoffersen_test(const ViolationSeries& v, double rate);
/// The independence component alone.
double christoffersen_independence_lr(const ViolationSeries& v);

struct DmResult : TestResult {
  std::size_t s2 = 0;  // count of d_t > 0
  std::size_t n = 0;
  double s2a = 0.0;
};

/// Sign-test form of Diebold-Mariano on squared errors:
/// d_t = e_a,t^2 - e_b,t^2, S2 = #{d_t > 0}, S2a = (S2 - T/2) / sqrt(T/4).
/// Ties count as non-positive. Two-sided p-value from the normal
/// approximation for T >= 30 and the exact binomial otherwise.
DmResult diebold_mariano(std::span<const double> errors_a,
                         std::span<const double> errors_b);

/// One-sided 5% critical value used when reading DM matrices: below -1.64
/// model i beats model j, above +1.64 it is beaten.
inline constexpr double kDmOneSidedCritical = 1.64;

/// Forecast errors of a VaR series against what it tried to predict, dated
/// like the VaR series. NextDay: e_d = var_return_d - r_d. Forward
/// historical: e_d = var_return_d + historical VaR over [d, d + h), dates
/// without enough future data are dropped.
struct ErrorSeries {
  std::vector<Date> dates;
  std::vector<double> errors;
};
ErrorSeries forecast_errors(const VarSeries& var, const ReturnSeries& returns,
                            const BrtTarget& target, double p = 0.95);

struct DmMatrix {
  std::vector<std::string> models;
  std::vector<std::vector<double>> s2a;      // [i][j] model i versus j
  std::vector<std::vector<double>> p_value;
  std::size_t common_days = 0;
};

/// Pairwise DM on the dates common to all series. The diagonal is defined
/// as S2a = 0 with p-value 1.
DmMatrix dm_matrix(const std::vector<ErrorSeries>& errors,
                   const std::vector<std::string>& models);

}  // namespace uevt
