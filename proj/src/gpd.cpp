#include "uevt/gpd.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "uevt/errors.hpp"

namespace uevt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Profile of the GPD likelihood in theta = xi / sigma. For fixed theta the
// likelihood is maximised by xi(theta) = mean(log1p(theta * x)), so the
// joint problem collapses to a 1-D search over theta.
struct Profile {
  std::span<const double> x;
  double n;
  int evals = 0;

  double xi_of(double theta) {
    ++evals;
    double s = 0.0;
    for (double v : x) s += std::log1p(theta * v);
    return s / n;
  }

  // Returns (loglik, xi); loglik is -inf outside the admissible xi range.
  std::pair<double, double> eval(double theta, double mean) {
    if (theta == 0.0) return {-n * (std::log(mean) + 1.0), 0.0};
    const double xi = xi_of(theta);
    if (!std::isfinite(xi) || xi < kXiLower || xi > kXiUpper) {
      return {kNegInf, xi};
    }
    return {-n * (std::log(xi / theta) + 1.0 + xi), xi};
  }
};

// Maximum over sigma with xi pinned at a bound.
std::pair<double, double> fit_fixed_xi(std::span<const double> x, double xi,
                                       double xmax, int& evals) {
  double lo = std::log(1e-8 * xmax);
  if (xi < 0.0) lo = std::log(-xi * xmax) + 1e-12;
  const double hi = std::log(10.0 * xmax);
  const auto neg = [&](double log_sigma) {
    ++evals;
    const double ll = gpd_loglik(x, xi, std::exp(log_sigma));
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
  };
  boost::uintmax_t iters = 200;
  const auto [ls, f] =
      boost::math::tools::brent_find_minima(neg, lo, hi, 52, iters);
  return {std::exp(ls), -f};
}

}  // namespace

double gpd_cdf(double x, const GpdParams& p) {
  if (!(x > 0.0)) return 0.0;
  const double z = x / p.sigma;
  if (std::abs(p.xi) < kXiZero) return -std::expm1(-z);
  const double t = p.xi * z;
  if (t <= -1.0) return 1.0;
  return -std::expm1(-std::log1p(t) / p.xi);
}

double gpd_pdf(double x, const GpdParams& p) {
  if (x < 0.0) return 0.0;
  const double z = x / p.sigma;
  if (std::abs(p.xi) < kXiZero) return std::exp(-z) / p.sigma;
  const double t = p.xi * z;
  if (t <= -1.0) return 0.0;
  return std::exp(-(1.0 / p.xi + 1.0) * std::log1p(t)) / p.sigma;
}

double gpd_quantile(double prob, const GpdParams& p) {
  if (!(prob >= 0.0 && prob < 1.0)) {
    if (prob == 1.0 && p.xi < 0.0) return -p.sigma / p.xi;
    throw std::invalid_argument("gpd_quantile: prob outside [0,1)");
  }
  const double l = std::log1p(-prob);
  if (std::abs(p.xi) < kXiZero) return -p.sigma * l;
  return p.sigma * std::expm1(-p.xi * l) / p.xi;
}

double gpd_loglik(std::span<const double> excesses, double xi, double sigma) {
  if (!(sigma > 0.0)) return kNegInf;
  const double log_sigma = std::log(sigma);
  double ll = 0.0;
  if (std::abs(xi) < kXiZero) {
    // (1 + 1/xi) log1p(xi z) expanded to first order in xi.
    for (double x : excesses) {
      const double z = x / sigma;
      ll -= log_sigma + z + xi * (z - 0.5 * z * z);
    }
    return ll;
  }
  const double k = 1.0 + 1.0 / xi;
  for (double x : excesses) {
    const double t = xi * x / sigma;
    if (t <= -1.0) return kNegInf;
    ll -= log_sigma + k * std::log1p(t);
  }
  return ll;
}

TailFit fit_gpd_mle(std::span<const double> excesses, std::size_t n_total,
                    double u) {
  if (excesses.size() < kMinExceedances) {
    throw FitError("fit_gpd_mle: " + std::to_string(excesses.size()) +
                   " exceedances, need at least " +
                   std::to_string(kMinExceedances) +
                   "; widen the threshold");
  }
  double sum = 0.0;
  double xmax = 0.0;
  for (double x : excesses) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw FitError("fit_gpd_mle: excesses must be finite and non-negative");
    }
    sum += x;
    xmax = std::max(xmax, x);
  }
  if (!(xmax > 0.0)) throw FitError("fit_gpd_mle: all excesses are zero");

  // Work on mean-normalised data; sigma is rescaled at the end.
  const double scale = sum / static_cast<double>(excesses.size());
  std::vector<double> x(excesses.begin(), excesses.end());
  for (double& v : x) v /= scale;
  xmax /= scale;

  Profile prof{x, static_cast<double>(x.size())};

  // theta grid: negative side up to the support edge -1/xmax, positive side
  // geometric up to where xi(theta) leaves the admissible range.
  const double theta_edge = -(1.0 - 1e-10) / xmax;
  double theta_top = 4.0;
  while (theta_top < 1e12 && prof.xi_of(theta_top) <= kXiUpper) {
    theta_top *= 4.0;
  }
  std::vector<double> grid;
  constexpr int kNeg = 12;
  constexpr int kPos = 24;
  for (int k = kNeg; k >= 1; --k) grid.push_back(theta_edge * k / kNeg);
  grid.push_back(0.0);
  for (int k = 0; k < kPos; ++k) {
    grid.push_back(theta_top * std::pow(1e-6, 1.0 - k / double(kPos - 1)));
  }

  std::vector<double> ll(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ll[i] = prof.eval(grid[i], 1.0).first;
    if (ll[i] > ll[best]) best = i;
  }

  double best_xi = 0.0;
  double best_sigma = 1.0;
  double best_ll = kNegInf;
  bool at_bound = false;

  if (std::isfinite(ll[best])) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const auto neg = [&](double th) {
      const double v = prof.eval(th, 1.0).first;
      return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
    };
    boost::uintmax_t iters = 200;
    auto [th, f] = boost::math::tools::brent_find_minima(neg, lo, hi, 52, iters);
    if (-f < ll[best]) {
      th = grid[best];
      f = -ll[best];
    }
    const double xi = th == 0.0 ? 0.0 : prof.xi_of(th);
    best_xi = xi;
    best_sigma = th == 0.0 ? 1.0 : xi / th;
    best_ll = gpd_loglik(x, best_xi, best_sigma);
  }

  // The interior search cannot see optima on the xi bounds; check them
  // whenever the profile runs into the infeasible region or the grid ends.
  const bool near_edge =
      !std::isfinite(ll[best]) || best <= 1 || best + 2 >= grid.size() ||
      !std::isfinite(ll[best - 1]) || !std::isfinite(ll[best + 1]);
  if (near_edge) {
    for (double xi_b : {kXiLower, kXiUpper}) {
      const auto [sig, l] = fit_fixed_xi(x, xi_b, xmax, prof.evals);
      if (l > best_ll) {
        best_ll = l;
        best_xi = xi_b;
        best_sigma = sig;
        at_bound = true;
      }
    }
  }

  if (!std::isfinite(best_ll)) {
    throw FitError("fit_gpd_mle: no finite likelihood; best iterate xi=" +
                   std::to_string(best_xi) + " sigma=" +
                   std::to_string(best_sigma * scale));
  }

  TailFit fit;
  fit.params = {best_xi, best_sigma * scale, u};
  fit.n = n_total == 0 ? excesses.size() : n_total;
  fit.n_u = excesses.size();
  fit.loglik = gpd_loglik(excesses, fit.params.xi, fit.params.sigma);
  fit.evaluations = prof.evals;
  fit.xi_at_bound = at_bound;
  if (fit.n < fit.n_u) throw FitError("fit_gpd_mle: n_total below n_u");
  return fit;
}

TailFit fit_tail(std::span<const double> losses, double threshold) {
  std::vector<double> excess;
  for (double l : losses) {
    if (l > threshold) excess.push_back(l - threshold);
  }
  return fit_gpd_mle(excess, losses.size(), threshold);
}

double evt_var(const TailFit& fit, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("evt_var: p must lie in (0,1)");
  }
  if (fit.n_u == 0) throw FitError("evt_var: no exceedances");
  const auto& g = fit.params;
  const double log_a = std::log(static_cast<double>(fit.n) /
                                static_cast<double>(fit.n_u) * (1.0 - p));
  if (std::abs(g.xi) < kXiZero) return g.u - g.sigma * log_a;
  return g.u + g.sigma * std::expm1(-g.xi * log_a) / g.xi;
}

EvtEstimate evt_var_at_threshold(std::span<const double> window_returns,
                                 double brt, double p) {
  std::vector<double> excess;
  for (double r : window_returns) {
    if (r < brt) excess.push_back(brt - r);  // (-r) - (-brt)
  }
  EvtEstimate e;
  e.fit = fit_gpd_mle(excess, window_returns.size(), -brt);
  e.var_loss = evt_var(e.fit, p);
  return e;
}

std::vector<double> sample_gpd(const GpdParams& params, std::size_t count,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (double& v : out) {
    double u = std::generate_canonical<double, 64>(rng);
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    v = gpd_quantile(u, params);
  }
  return out;
}

}  // namespace uevt
