#pragma once

#include <functional>

namespace degenlab {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  int panels = 0;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b]. Splits the worst panel until the
// summed Kronrod error estimate meets max(abs_tol, rel_tol * |value|).
// Nodes are strictly interior, so integrable endpoint singularities are
// never evaluated directly.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b, double rel_tol = 1e-11,
                              double abs_tol = 0.0, int max_panels = 4000);

// Value-only convenience wrapper; throws std::runtime_error on non-convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-11);

// Bisection root of phi on [lo, hi]. Requires a sign change; throws
// std::domain_error otherwise. Converges to relative x-tolerance rel_xtol.
double bisect(const std::function<double(double)>& phi, double lo, double hi,
              double rel_xtol = 1e-13, int max_iter = 200);

}  // namespace degenlab
