#include "uevt/garch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "uevt/errors.hpp"
#include "uevt/optimize.hpp"
#include "uevt/special.hpp"

namespace uevt {

namespace {

constexpr double kDofFloor = 2.05;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_orders(std::size_t p_order, std::size_t q_order) {
  if (p_order == 0 && q_order == 0) {
    throw std::invalid_argument("volatility model needs at least one term");
  }
}

void check_length(std::span<const double> r) {
  if (r.size() < kMinVolatilityObservations) {
    throw FitError("volatility fit: need at least " +
                   std::to_string(kMinVolatilityObservations) +
                   " observations, got " + std::to_string(r.size()));
  }
}

double demeaned_variance(std::span<const double> r, double mu) {
  double s = 0.0;
  for (double v : r) s += (v - mu) * (v - mu);
  return s / static_cast<double>(r.size());
}

// Runs Nelder-Mead, restarting from the returned point until it reports
// convergence twice in a row at the same value.
OptimResult minimise(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> x0, const char* what) {
  NelderMeadOptions opts;
  opts.initial_step = 0.2;
  opts.f_tol = 1e-11;
  opts.x_tol = 1e-7;
  opts.max_evals = 20000;
  OptimResult best = nelder_mead(f, std::move(x0), opts);
  int total = best.evals;
  for (int restart = 0; restart < 4; ++restart) {
    auto next = nelder_mead(f, best.x, opts);
    total += next.evals;
    const bool settled =
        next.converged &&
        std::abs(next.value - best.value) <= 1e-9 * (1.0 + std::abs(best.value));
    if (next.value <= best.value) best = std::move(next);
    if (settled) {
      best.converged = true;
      best.evals = total;
      return best;
    }
  }
  throw FitError(std::string(what) + ": optimiser did not converge after " +
                 std::to_string(total) + " evaluations; best objective " +
                 std::to_string(best.value));
}

template <class Filter>
VarSeries rolling_volatility_var(const ReturnSeries& returns,
                                 std::size_t window, std::size_t refit_every,
                                 const char* model, Filter&& fit_and_filter) {
  if (window < kMinVolatilityObservations || window > returns.size()) {
    throw std::invalid_argument(std::string(model) +
                                ": window must be in [250, series length]");
  }
  if (refit_every == 0) throw std::invalid_argument("refit_every must be > 0");
  VarSeries out;
  out.model = model;
  for (std::size_t t0 = window; t0 < returns.size(); t0 += refit_every) {
    const std::size_t end = std::min(t0 + refit_every, returns.size());
    const auto train = returns.values().subspan(t0 - window, window);
    // Observations from the block, excluding the last (its variance is
    // the forecast for the next day only if the block continued).
    const auto block = returns.values().subspan(t0, end - t0 - 1);
    std::vector<double> var;  // VaR (loss units) for dates t0..end-1
    try {
      var = fit_and_filter(train, block);
    } catch (const FitError&) {
      continue;  // block left as a gap
    }
    for (std::size_t t = t0; t < end; ++t) {
      out.dates.push_back(returns.date(t));
      out.var_loss.push_back(var[t - t0]);
    }
  }
  return out;
}

}  // namespace

double innovation_quantile(Innovation dist, double dof, double prob) {
  if (dist == Innovation::normal) return normal_quantile(prob);
  return student_t_quantile(prob, dof) * std::sqrt((dof - 2.0) / dof);
}

double innovation_abs_mean(Innovation dist, double dof) {
  if (dist == Innovation::normal) return std::sqrt(2.0 / std::numbers::pi);
  return student_t_abs_mean(dof);
}

double innovation_logpdf(Innovation dist, double dof, double eps,
                         double variance) {
  if (dist == Innovation::normal) {
    return -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(variance) +
                   eps * eps / variance);
  }
  return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
         0.5 * std::log(std::numbers::pi * (dof - 2.0)) -
         0.5 * std::log(variance) -
         0.5 * (dof + 1.0) * std::log1p(eps * eps / (variance * (dof - 2.0)));
}

double GarchParams::persistence() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0.0) +
         std::accumulate(beta.begin(), beta.end(), 0.0);
}

std::vector<double> garch_variances(const GarchParams& g,
                                    std::span<const double> r,
                                    double backcast) {
  const std::size_t n = r.size();
  std::vector<double> var(n + 1);
  const auto eps2 = [&](std::ptrdiff_t i) {
    return i < 0 ? backcast : (r[i] - g.mu) * (r[i] - g.mu);
  };
  const auto prev = [&](std::ptrdiff_t i) { return i < 0 ? backcast : var[i]; };
  for (std::size_t t = 0; t <= n; ++t) {
    const auto ti = static_cast<std::ptrdiff_t>(t);
    double v = g.alpha0;
    for (std::size_t i = 0; i < g.alpha.size(); ++i) {
      v += g.alpha[i] * eps2(ti - 1 - static_cast<std::ptrdiff_t>(i));
    }
    for (std::size_t j = 0; j < g.beta.size(); ++j) {
      v += g.beta[j] * prev(ti - 1 - static_cast<std::ptrdiff_t>(j));
    }
    var[t] = v;
  }
  return var;
}

double garch_loglik(const GarchParams& g, std::span<const double> r,
                    double backcast) {
  const auto var = garch_variances(g, r, backcast);
  double ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (!(var[t] > 0.0)) return -kInf;
    ll += innovation_logpdf(g.dist, g.dof, r[t] - g.mu, var[t]);
  }
  return ll;
}

GarchFit fit_garch(std::span<const double> returns, std::size_t p_order,
                   std::size_t q_order, Innovation dist) {
  check_orders(p_order, q_order);
  check_length(returns);
  const double mu = sample_mean(returns);
  const double backcast = demeaned_variance(returns, mu);
  if (!(backcast > 0.0)) throw FitError("fit_garch: zero variance sample");
  const std::size_t k = p_order + q_order;
  const bool t_dist = dist == Innovation::student_t;

  // x = [log alpha0, logits of (alpha, beta) against a slack term, log(dof - floor)]
  const auto unpack = [&](const std::vector<double>& x) {
    GarchParams g;
    g.mu = mu;
    g.dist = dist;
    g.alpha0 = std::exp(x[0]);
    double denom = 1.0;
    for (std::size_t i = 0; i < k; ++i) denom += std::exp(x[1 + i]);
    for (std::size_t i = 0; i < q_order; ++i) {
      g.alpha.push_back(std::exp(x[1 + i]) / denom);
    }
    for (std::size_t j = 0; j < p_order; ++j) {
      g.beta.push_back(std::exp(x[1 + q_order + j]) / denom);
    }
    if (t_dist) g.dof = kDofFloor + std::exp(x[1 + k]);
    return g;
  };
  const auto objective = [&](const std::vector<double>& x) {
    for (double v : x) {
      if (std::abs(v) > 50.0) return kInf;
    }
    return -garch_loglik(unpack(x), returns, backcast);
  };

  const double a_share = q_order > 0 ? 0.05 / static_cast<double>(q_order) : 0.0;
  const double b_share = p_order > 0 ? 0.90 / static_cast<double>(p_order) : 0.0;
  const double slack = 1.0 - 0.05 * (q_order > 0) - 0.90 * (p_order > 0);
  std::vector<double> x0{std::log(backcast * slack)};
  for (std::size_t i = 0; i < q_order; ++i) x0.push_back(std::log(a_share / slack));
  for (std::size_t j = 0; j < p_order; ++j) x0.push_back(std::log(b_share / slack));
  if (t_dist) x0.push_back(std::log(8.0 - kDofFloor));

  const auto res = minimise(objective, x0, "fit_garch");
  GarchFit fit;
  fit.params = unpack(res.x);
  fit.loglik = -res.value;
  fit.evals = res.evals;
  fit.backcast = backcast;
  return fit;
}

double EgarchParams::g(double z) const {
  return theta * z + lambda * (std::abs(z) - innovation_abs_mean(dist, dof));
}

std::vector<double> egarch_log_variances(const EgarchParams& e,
                                         std::span<const double> r,
                                         double backcast) {
  const std::size_t n = r.size();
  const double log_bc = std::log(backcast);
  const double abs_mean = innovation_abs_mean(e.dist, e.dof);
  std::vector<double> lv(n + 1);
  std::vector<double> gz(n, 0.0);
  for (std::size_t t = 0; t <= n; ++t) {
    double v = e.omega;
    for (std::size_t k = 0; k < e.beta.size(); ++k) {
      if (t >= k + 1) v += e.beta[k] * gz[t - 1 - k];
    }
    for (std::size_t k = 0; k < e.alpha.size(); ++k) {
      v += e.alpha[k] * (t >= k + 1 ? lv[t - 1 - k] : log_bc);
    }
    lv[t] = v;
    if (t < n) {
      const double z = (r[t] - e.mu) * std::exp(-0.5 * v);
      gz[t] = e.theta * z + e.lambda * (std::abs(z) - abs_mean);
    }
  }
  return lv;
}

double egarch_loglik(const EgarchParams& e, std::span<const double> r,
                     double backcast) {
  const auto lv = egarch_log_variances(e, r, backcast);
  double ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (!(std::abs(lv[t]) < 60.0)) return -kInf;
    ll += innovation_logpdf(e.dist, e.dof, r[t] - e.mu, std::exp(lv[t]));
  }
  return ll;
}

EgarchFit fit_egarch(std::span<const double> returns, std::size_t p_order,
                     std::size_t q_order, Innovation dist) {
  check_orders(p_order, q_order);
  if (q_order == 0) {
    throw std::invalid_argument("fit_egarch: need at least one shock term");
  }
  check_length(returns);
  const double mu = sample_mean(returns);
  const double backcast = demeaned_variance(returns, mu);
  if (!(backcast > 0.0)) throw FitError("fit_egarch: zero variance sample");
  const bool t_dist = dist == Innovation::student_t;

  // x = [omega, beta_2..beta_q, alpha_1..alpha_p, theta, lambda, log(dof - floor)]
  const auto unpack = [&](const std::vector<double>& x) {
    EgarchParams e;
    e.mu = mu;
    e.dist = dist;
    std::size_t i = 0;
    e.omega = x[i++];
    e.beta.push_back(1.0);
    for (std::size_t k = 1; k < q_order; ++k) e.beta.push_back(x[i++]);
    for (std::size_t k = 0; k < p_order; ++k) e.alpha.push_back(x[i++]);
    e.theta = x[i++];
    e.lambda = x[i++];
    if (t_dist) e.dof = kDofFloor + std::exp(x[i]);
    return e;
  };
  const auto objective = [&](const std::vector<double>& x) {
    const auto e = unpack(x);
    double s = 0.0;
    for (double a : e.alpha) s += std::abs(a);
    if (s >= 1.0) return kInf;
    if (t_dist && std::abs(x.back()) > 20.0) return kInf;
    return -egarch_loglik(e, returns, backcast);
  };

  const double log_var = std::log(backcast);
  const double a1 = p_order > 0 ? 0.9 : 0.0;
  std::vector<double> x0{(1.0 - a1) * log_var};
  for (std::size_t k = 1; k < q_order; ++k) x0.push_back(0.0);
  for (std::size_t k = 0; k < p_order; ++k) x0.push_back(k == 0 ? a1 : 0.0);
  x0.push_back(-0.05);
  x0.push_back(0.1);
  if (t_dist) x0.push_back(std::log(8.0 - kDofFloor));

  const auto res = minimise(objective, x0, "fit_egarch");
  EgarchFit fit;
  fit.params = unpack(res.x);
  fit.loglik = -res.value;
  fit.evals = res.evals;
  fit.backcast = backcast;
  return fit;
}

VarSeries var_garch(const ReturnSeries& returns, std::size_t window,
                    std::size_t refit_every, double p, Innovation dist,
                    std::size_t p_order, std::size_t q_order) {
  return rolling_volatility_var(
      returns, window, refit_every, "garch",
      [&](std::span<const double> train, std::span<const double> block) {
        const auto fit = fit_garch(train, p_order, q_order, dist);
        // Filter over train + block; the variance at position train.size()+j
        // is the forecast for block day j.
        std::vector<double> all(train.begin(), train.end());
        all.insert(all.end(), block.begin(), block.end());
        const auto var = garch_variances(fit.params, all, fit.backcast);
        const double q = innovation_quantile(dist, fit.params.dof, 1.0 - p);
        std::vector<double> out;
        for (std::size_t j = train.size(); j < var.size(); ++j) {
          out.push_back(-(fit.params.mu + q * std::sqrt(var[j])));
        }
        return out;
      });
}

VarSeries var_egarch(const ReturnSeries& returns, std::size_t window,
                     std::size_t refit_every, double p, Innovation dist,
                     std::size_t p_order, std::size_t q_order) {
  return rolling_volatility_var(
      returns, window, refit_every, "egarch",
      [&](std::span<const double> train, std::span<const double> block) {
        const auto fit = fit_egarch(train, p_order, q_order, dist);
        std::vector<double> all(train.begin(), train.end());
        all.insert(all.end(), block.begin(), block.end());
        const auto lv = egarch_log_variances(fit.params, all, fit.backcast);
        const double q = innovation_quantile(dist, fit.params.dof, 1.0 - p);
        std::vector<double> out;
        for (std::size_t j = train.size(); j < lv.size(); ++j) {
          out.push_back(-(fit.params.mu + q * std::exp(0.5 * lv[j])));
        }
        return out;
      });
}

}  // namespace uevt
