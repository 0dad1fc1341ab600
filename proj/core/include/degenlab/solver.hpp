#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "degenlab/field.hpp"
#include "degenlab/geometry.hpp"
#include "degenlab/grid_oracle.hpp"
#include "degenlab/metric.hpp"

namespace degenlab {

// Dirichlet problem for div(A grad u) = 0, A = diag(1, f(x1)^2), on a
// rectangle strictly inside (0, R) x IR, discretized on n1 x n2 cell
// centres with ghost-cell boundary values u_ghost = 2 g - u_cell.
struct DegenerateProblem {
  Geometry geometry;
  double x1_lo = 0.0;
  double x1_hi = 0.0;
  double x2_lo = 0.0;
  double x2_hi = 0.0;
  int n1 = 0;
  int n2 = 0;
  std::function<double(double, double)> boundary;
};

// Cell-centre lattice of the rectangle; validates the rectangle.
GridSpec cell_lattice(const Geometry& g, double x1_lo, double x1_hi,
                      double x2_lo, double x2_hi, int n1, int n2);

// The system matrix does not depend on the boundary data (ghost values
// enter the right-hand side only), so one factorization serves any number
// of boundary functions.
class FactoredProblem {
 public:
  FactoredProblem(const Geometry& g, double x1_lo, double x1_hi,
                  double x2_lo, double x2_hi, int n1, int n2);
  ~FactoredProblem();
  FactoredProblem(FactoredProblem&&) noexcept;
  FactoredProblem& operator=(FactoredProblem&&) noexcept;

  const GridSpec& cells() const;
  // Solves with the given Dirichlet data and verifies the discrete maximum
  // principle (throws std::runtime_error on violation).
  DiscreteField solve(const std::function<double(double, double)>& g) const;
  double last_residual() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SolveResult {
  DiscreteField u;
  double residual = 0.0;
  int iterations = 0;
  double energy = 0.0;  // node-sum of |grad_A u|^2 times cell area
};
SolveResult solve(const DegenerateProblem& p);

// w_k = 2^k (v - 1) + 1 for k = 0..k_max; requires max v <= 1 + 1e-12 and
// verifies the recursion w_{k+1} = 2 w_k - 1 to 1e-12.
std::vector<DiscreteField> truncation_cascade(const DiscreteField& v,
                                              int k_max);

// max - min of u over the nodes of the numeric ball {dist < r}; requires
// at least 16 nodes inside.
double oscillation(const DiscreteField& u, const DistanceField& dist,
                   double r);

struct OscillationLevel {
  int level = 0;
  double r = 0.0;
  double osc = 0.0;
  double ratio = 0.0;          // osc_l / osc_{l-1}; NaN at level 0
  double predicted_cap = 0.0;  // 1 - lambda(r)/2; NaN without a provider
  std::size_t nodes = 0;
};

struct OscillationReport {
  Point2 center;
  // True when the renormalized v = (2/osc)(u - (sup+inf)/2) satisfies
  // |{v <= 0}| >= half the ball nodes at the top radius; otherwise the
  // mirrored hypothesis |{v >= 0}| >= half holds.
  bool lower_half = true;
  std::vector<OscillationLevel> levels;
};

// Solves p, then measures osc over B(x, r0 / 2^l) for l = 0..levels-1.
// Requires B(x, 3 r0) inside the rectangle. The predicted per-level cap is
// reported for comparison, never asserted.
OscillationReport oscillation_decay_run(
    const DegenerateProblem& p, Point2 x, double r0, int levels,
    const std::function<double(double)>& lambda_of_r = {});

}  // namespace degenlab
