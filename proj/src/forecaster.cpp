#include "uevt/forecaster.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace uevt {

namespace {

constexpr const char* kRegressorNames[] = {"intercept", "variance",
                                           "ambiguity"};

}  // namespace

RegressionFit fit_brt_regression(std::span<const double> brt,
                                 std::span<const double> variance,
                                 std::span<const double> ambiguity) {
  const std::size_t n = brt.size();
  if (variance.size() != n || ambiguity.size() != n) {
    throw DataError("fit_brt_regression: misaligned inputs");
  }
  if (n < kMinRegressionRows) {
    throw FitError("fit_brt_regression: " + std::to_string(n) +
                   " rows, need at least " +
                   std::to_string(kMinRegressionRows));
  }
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = variance[i];
    X(i, 2) = ambiguity[i];
    y(i) = brt[i];
  }
  for (int j = 1; j < 3; ++j) {
    if (X.col(j).maxCoeff() == X.col(j).minCoeff()) {
      throw FitError(std::string("fit_brt_regression: regressor '") +
                     kRegressorNames[j] + "' is constant");
    }
  }
  // Equilibrate columns; regressors differ by orders of magnitude.
  Eigen::Vector3d scale;
  for (int j = 0; j < 3; ++j) scale(j) = X.col(j).norm();
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    const int dropped = qr.colsPermutation().indices()(2);
    throw FitError(std::string("fit_brt_regression: design is rank deficient; "
                               "regressor '") +
                   kRegressorNames[dropped] + "' is collinear");
  }
  const Eigen::Vector3d bs = qr.solve(y);
  const Eigen::Vector3d b = bs.cwiseQuotient(scale);

  const Eigen::VectorXd resid = y - X * b;
  const double rss = resid.squaredNorm();
  const double ybar = y.mean();
  const double tss = (y.array() - ybar).square().sum();
  const double s2 = rss / static_cast<double>(n - 3);
  // (X'X)^-1 through the scaled R factor: (Xs'Xs)^-1 = P R^-1 R^-T P'.
  const Eigen::Matrix3d R =
      qr.matrixQR().topLeftCorner(3, 3).triangularView<Eigen::Upper>();
  const Eigen::Matrix3d Rinv = R.inverse();
  const Eigen::Matrix3d cov_perm = Rinv * Rinv.transpose();
  const auto& perm = qr.colsPermutation();
  const Eigen::Matrix3d cov_s =
      perm * cov_perm * perm.transpose();

  RegressionFit fit;
  for (int j = 0; j < 3; ++j) {
    fit.beta[j] = b(j);
    fit.stderrs[j] = std::sqrt(s2 * cov_s(j, j)) / scale(j);
  }
  fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  fit.n_obs = n;
  return fit;
}

std::vector<double> regression_residuals(const RegressionFit& fit,
                                         std::span<const double> brt,
                                         std::span<const double> variance,
                                         std::span<const double> ambiguity) {
  std::vector<double> e(brt.size());
  for (std::size_t i = 0; i < brt.size(); ++i) {
    e[i] = brt[i] - (fit.beta[0] + fit.beta[1] * variance[i] +
                     fit.beta[2] * ambiguity[i]);
  }
  return e;
}

BrtPrediction predict_brt(const RegressionFit& fit, double variance,
                          double ambiguity) {
  const double v =
      fit.beta[0] + fit.beta[1] * variance + fit.beta[2] * ambiguity;
  if (v >= 0.0 || !std::isfinite(v)) return {kBrtClamp, true};
  return {v, false};
}

std::string format_flags(unsigned flags) {
  if (flags == kFlagNone) return "ok";
  std::string out;
  const auto add = [&](const char* s) { out += (out.empty() ? "" : "|"); out += s; };
  if (flags & kFlagClamped) add("clamped");
  if (flags & kFlagRelaxed) add("relaxed");
  if (flags & kFlagStaleAmbiguity) add("stale_ambiguity");
  return out;
}

VarForecast uncertain_evt_var(std::span<const double> evt_window,
                              double brt_hat, double p) {
  VarForecast f;
  f.brt_hat = brt_hat;
  double u = brt_hat;
  const auto below = static_cast<std::size_t>(std::count_if(
      evt_window.begin(), evt_window.end(), [&](double r) { return r < u; }));
  if (below < kMinExceedances) {
    std::vector<double> s(evt_window.begin(), evt_window.end());
    std::sort(s.begin(), s.end());
    if (s.size() <= kMinExceedances) {
      throw FitError("uncertain_evt_var: EVT window too short");
    }
    const auto it = std::upper_bound(s.begin(), s.end(),
                                     s[kMinExceedances - 1]);
    if (it == s.end() || *it >= 0.0) {
      throw FitError("uncertain_evt_var: no negative threshold leaves " +
                     std::to_string(kMinExceedances) + " exceedances");
    }
    u = *it;
    f.flags |= kFlagRelaxed;
  }
  const auto est = evt_var_at_threshold(evt_window, u, p);
  f.threshold = u;
  f.gpd = est.fit;
  f.var_loss = est.var_loss;
  f.var_return = -est.var_loss;
  return f;
}

PipelineResult run_pipeline(const ReturnSeries& daily,
                            const IntradayPanel& panel,
                            const PipelineConfig& config) {
  const auto& spec = config.spec;
  spec.validate();
  if (!(config.p > 0.0 && config.p < 1.0)) {
    throw std::invalid_argument("run_pipeline: p must lie in (0,1)");
  }
  if (config.target.span() > spec.hist_len) {
    throw std::invalid_argument("run_pipeline: target horizon exceeds hist_len");
  }
  if (panel.empty()) {
    throw DataError(
        "run_pipeline: ambiguity regressor requires intraday data; the "
        "intraday panel is empty");
  }
  if (daily.size() <= spec.train_len) {
    throw DataError("run_pipeline: need more than " +
                    std::to_string(spec.train_len) + " daily returns");
  }
  if (spec.lag < 2) throw std::invalid_argument("run_pipeline: lag must be >= 2");

  PipelineResult result;
  result.ambiguity = ambiguity_series(panel, build_bins());

  // variance[k] covers returns [k - lag + 1, k]; valid for k >= lag - 1.
  const auto rv = rolling_variance(daily.values(), spec.lag, config.exec);
  const auto variance_at = [&](std::size_t k) -> std::optional<double> {
    if (k + 1 < spec.lag) return std::nullopt;
    return rv[k + 1 - spec.lag];
  };
  // Regressors for date index t: variance dated t - lag and the latest
  // monthly ambiguity before t's month.
  struct Regressors {
    double variance;
    double ambiguity;
    bool stale;
  };
  const auto regressors = [&](std::size_t t) -> std::optional<Regressors> {
    if (t < spec.lag) return std::nullopt;
    const auto v = variance_at(t - spec.lag);
    const auto a = result.ambiguity.value_before(daily.date(t));
    if (!v || !a) return std::nullopt;
    return Regressors{*v, a->mho2, a->stale};
  };

  const auto starts = window_starts(daily.size(), spec);
  result.realized = brt_series(daily, spec, config.target, config.p,
                               config.exec);
  const std::size_t realized_first =
      regression_span(starts.front(), spec).first;
  // Map date index -> realized point (or none).
  std::vector<const BrtPoint*> by_index(daily.size(), nullptr);
  {
    std::size_t k = realized_first;
    for (const auto& pt : result.realized.points) {
      while (daily.date(k) != pt.date) ++k;
      by_index[k] = &pt;
    }
  }

  std::vector<WindowReport> reports(starts.size());
  std::vector<std::vector<VarForecast>> blocks(starts.size());

  const auto run_window = [&](std::size_t w) {
    const std::size_t T = starts[w];
    auto& rep = reports[w];
    rep.window_start = T;
    try {
      const auto [first, last] = regression_span(T, spec);
      std::vector<double> y, xv, xa;
      for (std::size_t t = first; t <= last; ++t) {
        if (!by_index[t]) continue;
        const auto r = regressors(t);
        if (!r) continue;
        y.push_back(by_index[t]->brt);
        xv.push_back(r->variance);
        xa.push_back(r->ambiguity);
      }
      rep.fit = fit_brt_regression(y, xv, xa);

      const auto evt_window =
          daily.values().subspan(T + spec.train_len - spec.evt_len,
                                 spec.evt_len);
      const std::size_t end =
          std::min(T + spec.train_len + spec.forecast_len, daily.size());
      std::size_t skipped = 0;
      for (std::size_t d = T + spec.train_len; d < end; ++d) {
        const auto r = regressors(d);
        if (!r) {
          ++skipped;
          continue;
        }
        const auto pred = predict_brt(rep.fit, r->variance, r->ambiguity);
        auto f = uncertain_evt_var(evt_window, pred.brt_hat, config.p);
        f.date = daily.date(d);
        f.window_start = T;
        if (pred.clamped) f.flags |= kFlagClamped;
        if (r->stale) f.flags |= kFlagStaleAmbiguity;
        blocks[w].push_back(f);
      }
      rep.ok = true;
      rep.message = skipped == 0
                        ? "ok"
                        : std::to_string(skipped) +
                              " forecast days lacked regressors";
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.message = e.what();
      blocks[w].clear();
    }
  };

  const auto nw = static_cast<std::ptrdiff_t>(starts.size());
  if (config.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t w = 0; w < nw; ++w) run_window(static_cast<std::size_t>(w));
  } else {
    for (std::ptrdiff_t w = 0; w < nw; ++w) run_window(static_cast<std::size_t>(w));
  }

  for (auto& b : blocks) {
    result.forecasts.insert(result.forecasts.end(), b.begin(), b.end());
  }
  result.windows = std::move(reports);
  return result;
}

}  // namespace uevt
