#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uevt/errors.hpp"

namespace uevt {

/// Generalized Pareto tail. `u` is the threshold in loss units (losses are
/// negated returns), `xi` the shape and `sigma` the scale.
struct GpdParams {
  double xi = 0.0;
  double sigma = 1.0;
  double u = 0.0;
};

/// A GPD fitted to the exceedances of a sample of `n` losses, `n_u` of them
/// strictly above the threshold.
struct TailFit {
  GpdParams params;
  std::size_t n = 0;
  std::size_t n_u = 0;
  double loglik = 0.0;
  int evaluations = 0;
  bool xi_at_bound = false;
};

inline constexpr std::size_t kMinExceedances = 10;
/// Below this |xi| the exponential branch is used.
inline constexpr double kXiZero = 1e-9;
inline constexpr double kXiLower = -0.5;
inline constexpr double kXiUpper = 1.5;

/// CDF of the excess `x` over the threshold. Returns 0 for x <= 0 and
/// exactly 1 beyond the finite upper end point when xi < 0.
double gpd_cdf(double x, const GpdParams& params);
double gpd_pdf(double x, const GpdParams& params);
/// Inverse CDF in excess units.
double gpd_quantile(double prob, const GpdParams& params);

double gpd_loglik(std::span<const double> excesses, double xi, double sigma);

/// Maximum-likelihood (xi, sigma) for non-negative excesses. `n_total` is the
/// size of the sample the exceedances came from (defaults to the number of
/// excesses) and `u` is recorded on the result.
TailFit fit_gpd_mle(std::span<const double> excesses, std::size_t n_total = 0,
                    double u = 0.0);

/// Fits the tail of a loss sample above `threshold`; exceedances are losses
/// strictly greater than the threshold and n is the full sample size.
TailFit fit_tail(std::span<const double> losses, double threshold);

/// Peaks-over-threshold VaR in loss units at confidence `p`.
double evt_var(const TailFit& fit, double p);

struct EvtEstimate {
  TailFit fit;
  double var_loss = 0.0;
};

/// EVT VaR of a window of returns with a return-space threshold `brt` < 0:
/// returns strictly below `brt` form the tail, fitted in loss space with
/// u = -brt and n = window length.
EvtEstimate evt_var_at_threshold(std::span<const double> window_returns,
                                 double brt, double p);

/// Inverse-CDF sample of excesses; deterministic for a fixed seed.
std::vector<double> sample_gpd(const GpdParams& params, std::size_t count,
                               std::uint64_t seed);

}  // namespace uevt
