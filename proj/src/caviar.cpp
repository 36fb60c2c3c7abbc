#include "uevt/caviar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "uevt/errors.hpp"
#include "uevt/garch.hpp"
#include "uevt/optimize.hpp"
#include "uevt/seed.hpp"

namespace uevt {

namespace {

constexpr int kRandomStarts = 10;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::vector<double> caviar_path(const CaviarParams& params,
                                std::span<const double> x, double q0) {
  const auto& b = params.beta;
  std::vector<double> q(x.size() + 1);
  q[0] = q0;
  for (std::size_t t = 1; t <= x.size(); ++t) {
    const double xp = x[t - 1];
    q[t] = b[0] + b[1] * q[t - 1] + b[2] * pos_part(xp) + b[3] * neg_part(xp);
  }
  return q;
}

double caviar_loss(const CaviarParams& params, std::span<const double> x,
                   double theta, double q0) {
  if (x.size() < 2) throw std::invalid_argument("caviar_loss: too few points");
  const auto& b = params.beta;
  double q = q0;
  double total = 0.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    q = b[0] + b[1] * q + b[2] * pos_part(x[t - 1]) + b[3] * neg_part(x[t - 1]);
    const double e = x[t] - q;
    total += (theta - (e < 0.0 ? 1.0 : 0.0)) * e;
  }
  return total / static_cast<double>(x.size() - 1);
}

double caviar_initial_quantile(std::span<const double> x, double theta) {
  const std::size_t head = std::max<std::size_t>(x.size() / 10, 1);
  return empirical_quantile(x.first(head), theta);
}

CaviarFit fit_caviar_asymmetric(std::span<const double> x, double p,
                                std::uint64_t seed, bool constant_only) {
  if (!constant_only && x.size() < kMinVolatilityObservations) {
    throw FitError("fit_caviar_asymmetric: need at least " +
                   std::to_string(kMinVolatilityObservations) +
                   " observations");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("fit_caviar_asymmetric: p outside (0,1)");
  }
  const double theta = 1.0 - p;
  const double q0 = caviar_initial_quantile(x, theta);

  const auto params_of = [&](const std::vector<double>& v) {
    CaviarParams c;
    if (constant_only) {
      c.beta = {v[0], 0.0, 0.0, 0.0};
    } else {
      c.beta = {v[0], v[1], v[2], v[3]};
    }
    return c;
  };
  const auto objective = [&](const std::vector<double>& v) {
    if (!constant_only && std::abs(v[1]) >= 1.0) return kInf;
    return caviar_loss(params_of(v), x, theta, q0);
  };

  NelderMeadOptions opts;
  opts.initial_step = 0.1;
  opts.min_scale = 0.01;  // quantiles of daily returns are O(0.01)
  opts.f_tol = 1e-12;
  opts.x_tol = 1e-10;
  opts.max_evals = 4000;

  std::vector<std::vector<double>> starts;
  if (constant_only) {
    starts.push_back({q0});
  } else {
    starts.push_back({0.1 * q0, 0.9, 0.0, -0.2});
    std::mt19937_64 rng(derive_seed(seed, "caviar-starts"));
    std::uniform_real_distribution<double> b2(0.5, 0.95), b3(-0.3, 0.3),
        b4(-0.6, 0.0);
    for (int k = 0; k < kRandomStarts; ++k) {
      const double s2 = b2(rng);
      starts.push_back({(1.0 - s2) * q0, s2, b3(rng), b4(rng)});
    }
  }

  OptimResult best;
  best.value = kInf;
  for (const auto& s : starts) {
    auto r = nelder_mead(objective, s, opts);
    if (r.value < best.value) best = std::move(r);
  }
  // Polish from the best start; the tick loss is piecewise linear so a
  // restart often shaves off a little more.
  auto polished = nelder_mead(objective, best.x, opts);
  const bool converged = polished.converged;
  if (polished.value <= best.value) best = std::move(polished);

  CaviarFit fit;
  fit.params = params_of(best.x);
  fit.loss = best.value;
  fit.q0 = q0;
  fit.converged = converged;
  return fit;
}

VarSeries var_caviar(const ReturnSeries& returns, std::size_t window,
                     std::size_t refit_every, double p, std::uint64_t seed) {
  if (window < kMinVolatilityObservations || window > returns.size()) {
    throw std::invalid_argument("var_caviar: window must be in [250, n]");
  }
  if (refit_every == 0) throw std::invalid_argument("refit_every must be > 0");
  VarSeries out;
  out.model = "caviar";
  for (std::size_t t0 = window; t0 < returns.size(); t0 += refit_every) {
    const std::size_t end = std::min(t0 + refit_every, returns.size());
    const auto train = returns.values().subspan(t0 - window, window);
    const auto fit = fit_caviar_asymmetric(train, p, derive_seed(seed, "caviar", t0));
    // Path over train plus all but the last block day gives quantiles for
    // dates t0 .. end-1 at positions window .. window + (end - t0) - 1.
    const auto span = returns.values().subspan(t0 - window, end - 1 - (t0 - window));
    const auto q = caviar_path(fit.params, span, fit.q0);
    for (std::size_t t = t0; t < end; ++t) {
      out.dates.push_back(returns.date(t));
      out.var_loss.push_back(-q[t - (t0 - window)]);
    }
  }
  return out;
}

}  // namespace uevt
