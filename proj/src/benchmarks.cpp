#include "uevt/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "uevt/gpd.hpp"
#include "uevt/seed.hpp"
#include "uevt/special.hpp"

namespace uevt {

namespace {

void check_window(const ReturnSeries& r, std::size_t window, std::size_t min) {
  if (window < min) {
    throw std::invalid_argument("window must be >= " + std::to_string(min));
  }
  if (window > r.size()) {
    throw std::invalid_argument("window exceeds series length");
  }
}

template <class F>
VarSeries rolling(const ReturnSeries& r, std::size_t window, std::string model,
                  F&& per_window) {
  VarSeries out;
  out.model = std::move(model);
  for (std::size_t t = window; t < r.size(); ++t) {
    out.dates.push_back(r.date(t));
    out.var_loss.push_back(per_window(r.values().subspan(t - window, window)));
  }
  return out;
}

}  // namespace

VarSeries var_historical(const ReturnSeries& returns, std::size_t window,
                         double p) {
  check_window(returns, window, 1);
  return rolling(returns, window, "historical", [p](auto w) {
    return -empirical_quantile(w, 1.0 - p);
  });
}

double var_covar(double sigma, double p) { return normal_quantile(p) * sigma; }

VarSeries var_variance_covariance(const ReturnSeries& returns,
                                  std::size_t window, double p) {
  check_window(returns, window, 2);
  return rolling(returns, window, "variance_covariance", [p](auto w) {
    return var_covar(std::sqrt(sample_variance(w)), p);
  });
}

double mc_gbm_var(std::span<const double> window, double p,
                  std::size_t n_paths, std::uint64_t seed) {
  if (n_paths < 1000) {
    throw std::invalid_argument("mc_gbm_var: need at least 1000 paths");
  }
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  if (window.size() < 2 || *lo == *hi) {
    throw FitError("mc_gbm_var: constant window, zero diffusion");
  }
  const double m = sample_mean(window);
  const double sigma = std::sqrt(sample_variance(window));
  if (!(sigma > 0.0)) {
    throw FitError("mc_gbm_var: zero diffusion estimate");
  }
  // dS = mu S dt + sigma S dW with mu = m + sigma^2 / 2, so one-day log
  // returns are (mu - sigma^2/2) + sigma Z.
  const double mu = m + 0.5 * sigma * sigma;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> sims(n_paths);
  for (double& s : sims) s = (mu - 0.5 * sigma * sigma) + sigma * z(rng);
  return -empirical_quantile(sims, 1.0 - p);
}

VarSeries var_monte_carlo_gbm(const ReturnSeries& returns, std::size_t window,
                              double p, std::size_t n_paths,
                              std::uint64_t seed, Exec exec) {
  check_window(returns, window, 2);
  VarSeries out;
  out.model = "monte_carlo";
  const std::size_t count = returns.size() - window;
  out.dates.assign(returns.dates().begin() + window, returns.dates().end());
  out.var_loss.resize(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  std::vector<std::exception_ptr> errors(count);
  const auto one = [&](std::ptrdiff_t k) {
    const auto t = static_cast<std::size_t>(k) + window;
    try {
      out.var_loss[k] =
          mc_gbm_var(returns.values().subspan(t - window, window), p, n_paths,
                     derive_seed(seed, "gbm", t));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) one(k);
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) one(k);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double plain_evt_var(std::span<const double> window, double p,
                     double percentile) {
  std::vector<double> losses(window.size());
  std::transform(window.begin(), window.end(), losses.begin(),
                 [](double r) { return -r; });
  const double u = empirical_quantile(losses, percentile);
  return evt_var_at_threshold(window, -u, p).var_loss;
}

VarSeries var_plain_evt(const ReturnSeries& returns, std::size_t window,
                        double p, double percentile) {
  check_window(returns, window, 100);
  return rolling(returns, window, "evt", [&](auto w) {
    return plain_evt_var(w, p, percentile);
  });
}

}  // namespace uevt
