#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "uevt/benchmarks.hpp"

namespace uevt {

enum class Innovation { normal, student_t };

/// Quantile of the unit-variance innovation law.
double innovation_quantile(Innovation dist, double dof, double prob);
/// E|Z| of the unit-variance innovation law.
double innovation_abs_mean(Innovation dist, double dof);
/// Log density of eps given its conditional variance.
double innovation_logpdf(Innovation dist, double dof, double eps,
                         double variance);

/// sigma^2_t = alpha0 + sum_i alpha_i eps^2_{t-i} + sum_j beta_j sigma^2_{t-j}
struct GarchParams {
  double mu = 0.0;
  double alpha0 = 0.0;
  std::vector<double> alpha;  // q ARCH terms
  std::vector<double> beta;   // p GARCH terms
  Innovation dist = Innovation::normal;
  double dof = std::numeric_limits<double>::infinity();

  double persistence() const;
};

struct GarchFit {
  GarchParams params;
  double loglik = 0.0;
  int evals = 0;
  double backcast = 0.0;
};

/// Conditional variances for each observation of `returns` plus the
/// one-step-ahead forecast (size n + 1). Pre-sample squared residuals and
/// variances are set to `backcast`.
std::vector<double> garch_variances(const GarchParams& params,
                                    std::span<const double> returns,
                                    double backcast);
double garch_loglik(const GarchParams& params, std::span<const double> returns,
                    double backcast);

/// Gaussian or Student-t quasi maximum likelihood. Stationarity
/// (sum alpha + sum beta < 1) holds by construction of the search space.
GarchFit fit_garch(std::span<const double> returns, std::size_t p_order = 1,
                   std::size_t q_order = 1,
                   Innovation dist = Innovation::normal);

/// log sigma^2_t = omega + sum_k beta_k g(Z_{t-k}) + sum_k alpha_k log sigma^2_{t-k}
/// with g(Z) = theta Z + lambda (|Z| - E|Z|). beta_1 is fixed at 1 since
/// only the products beta_1 * (theta, lambda) are identified.
struct EgarchParams {
  double mu = 0.0;
  double omega = 0.0;
  std::vector<double> beta;   // q terms, beta[0] == 1
  std::vector<double> alpha;  // p terms
  double theta = 0.0;
  double lambda = 0.0;
  Innovation dist = Innovation::normal;
  double dof = std::numeric_limits<double>::infinity();

  double g(double z) const;
};

struct EgarchFit {
  EgarchParams params;
  double loglik = 0.0;
  int evals = 0;
  double backcast = 0.0;
};

/// Conditional log variances per observation plus the one-step forecast.
std::vector<double> egarch_log_variances(const EgarchParams& params,
                                         std::span<const double> returns,
                                         double backcast);
double egarch_loglik(const EgarchParams& params,
                     std::span<const double> returns, double backcast);

EgarchFit fit_egarch(std::span<const double> returns, std::size_t p_order = 1,
                     std::size_t q_order = 1,
                     Innovation dist = Innovation::normal);

inline constexpr std::size_t kMinVolatilityObservations = 250;

/// Rolling VaR: refit on the trailing `window` every `refit_every` days and
/// filter forward with the fitted parameters in between.
VarSeries var_garch(const ReturnSeries& returns, std::size_t window,
                    std::size_t refit_every, double p,
                    Innovation dist = Innovation::normal,
                    std::size_t p_order = 1, std::size_t q_order = 1);
VarSeries var_egarch(const ReturnSeries& returns, std::size_t window,
                     std::size_t refit_every, double p,
                     Innovation dist = Innovation::normal,
                     std::size_t p_order = 1, std::size_t q_order = 1);

}  // namespace uevt
