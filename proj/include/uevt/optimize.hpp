#pragma once

#include <functional>
#include <vector>

namespace uevt {

struct NelderMeadOptions {
  // Initial simplex edge along coordinate i is
  // initial_step * max(|x0_i|, min_scale).
  double initial_step = 0.1;
  double min_scale = 1.0;
  double f_tol = 1e-10;  // relative spread of simplex values
  double x_tol = 1e-8;   // simplex diameter
  int max_evals = 20000;
};

struct OptimResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Minimises `f` with the Nelder-Mead simplex method. Non-finite objective
/// values are treated as +infinity, so constraints can be expressed by
/// returning infinity outside the feasible set.
OptimResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                        std::vector<double> x0,
                        const NelderMeadOptions& opts = {});

}  // namespace uevt
