#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uevt/benchmarks.hpp"

namespace uevt {

/// Asymmetric-slope CAViaR on the return quantile q_t (negative for left
/// tails): q_t = b1 + b2 q_{t-1} + b3 max(x_{t-1}, 0) + b4 (-min(x_{t-1}, 0)).
struct CaviarParams {
  std::array<double, 4> beta{};
};

struct CaviarFit {
  CaviarParams params;
  double loss = 0.0;
  double q0 = 0.0;  // initial quantile
  bool converged = false;
};

/// Positive and negative parts: x = pos(x) - neg(x), both >= 0.
inline double pos_part(double x) { return x > 0.0 ? x : 0.0; }
inline double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

/// Quantile path for x, size n + 1; entry n is the next-day forecast.
std::vector<double> caviar_path(const CaviarParams& params,
                                std::span<const double> x, double q0);

/// Mean tick loss (theta - 1{x_t < q_t}) (x_t - q_t) over t >= 1.
double caviar_loss(const CaviarParams& params, std::span<const double> x,
                   double theta, double q0);

/// Empirical theta-quantile of the first 10% of the sample.
double caviar_initial_quantile(std::span<const double> x, double theta);

/// Fits the model at confidence p (theta = 1 - p) by Nelder-Mead from a
/// fixed start plus 10 seeded random starts. With `constant_only`, b2..b4
/// are held at zero.
CaviarFit fit_caviar_asymmetric(std::span<const double> x, double p,
                                std::uint64_t seed,
                                bool constant_only = false);

VarSeries var_caviar(const ReturnSeries& returns, std::size_t window,
                     std::size_t refit_every, double p, std::uint64_t seed);

}  // namespace uevt
