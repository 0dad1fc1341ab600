#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "degenlab/field.hpp"
#include "degenlab/geometry.hpp"
#include "degenlab/grid_oracle.hpp"
#include "degenlab/metric.hpp"

namespace degenlab {

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;  // right side without the constant
  double implied_constant = 0.0;
  bool applicable = true;     // preconditions held
  bool indeterminate = false; // rhs = 0, no constant implied
  // Caccioppoli intermediate bound: integral of |psi grad_A u+|^2 against
  // integral of |grad_A psi|^2 u+^2 (bounded by 4 + tolerance).
  double aux_lhs = 0.0;
  double aux_rhs = 0.0;
};

// True when no lattice boundary node lies inside {dist < r}.
bool ball_inside_grid(const DistanceField& dist, double r);

// lhs = int_B |w - mean_B w|, rhs = r * int_2B |grad_A w|.
InequalityReport poincare_trial(const Geometry& g, const DiscreteField& w,
                                const DistanceField& dist, double r);

// Same two sides with int_B |w| on the left; requires w = 0 on the node
// set E with |E| >= half the ball node count.
InequalityReport vanishing_sobolev_trial(const Geometry& g,
                                         const DiscreteField& w,
                                         const DistanceField& dist, double r,
                                         const std::vector<char>& zero_set);

// lhs = int_{2B} |grad_A (psi u+)|^2,
// rhs = (max|psi| + max|grad_A psi|)^2 int_{psi>0} u+^2.
// u must satisfy the interior flux scheme (residual check).
InequalityReport caccioppoli_trial(const Geometry& g, const DiscreteField& u,
                                   const DiscreteField& psi,
                                   const DistanceField& dist, double r);

struct DeGiorgiSets {
  double area_A = 0.0;   // {w <= 0} within B(x, r)
  double area_C = 0.0;   // {w >= 1} within B(x, r)
  double area_D = 0.0;   // {0 < w < 1} within B(x, 2r)
  double area_B = 0.0;   // |B(x, r)|
  double energy = 0.0;   // int_{B(x,2r)} |grad_A w+|^2
  double r = 0.0;
};
DeGiorgiSets degiorgi_sets(const Geometry& g, const DiscreteField& w,
                           const DistanceField& dist, double r);

// lhs = energy * |D|, rhs = (|A||C| / (r |B|))^2; inapplicable unless
// |A| >= |B| / 2. Implied constant is a floor (lhs >= C1 rhs).
InequalityReport degiorgi_check(const DeGiorgiSets& sets);

// Deterministic seed stream (splitmix64 step of master + index).
std::uint64_t seed_stream(std::uint64_t master, std::uint64_t index);

// Uniform(-1,1) values on a coarse lattice over the rectangle, evaluated
// by bilinear interpolation: Lipschitz with computable gradient bounds.
std::function<double(double, double)> random_bilinear_function(
    double x1_lo, double x1_hi, double x2_lo, double x2_hi,
    std::uint64_t seed, int coarse = 9);
DiscreteField random_piecewise_field(const GridSpec& spec,
                                     std::uint64_t seed, int coarse = 9);

enum class InequalityKind { Poincare, Sobolev, Caccioppoli, DeGiorgi };
std::string inequality_name(InequalityKind kind);

struct McConfig {
  int calibration_trials = 500;  // 60 structured + the rest random
  int validation_trials = 500;
  double slack = 0.01;
  std::uint64_t master_seed = 2026;
};

struct TrialRow {
  std::uint64_t seed = 0;
  bool calibration = true;
  bool applicable = true;
  bool indeterminate = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double implied = 0.0;
};

struct McOutcome {
  InequalityKind kind = InequalityKind::Poincare;
  double calibrated = 0.0;         // max implied (min for DeGiorgi)
  double validation_extreme = 0.0;
  int violations = 0;              // validation trials beyond slack
  int calibration_used = 0;
  int validation_used = 0;
  double max_aux_ratio = 0.0;      // Caccioppoli intermediate ratio
  std::vector<TrialRow> rows;
};

// Calibration/validation Monte-Carlo around the control ball B(center, r):
// constants are calibrated as the extreme over the first phase (structured
// shapes plus random fields) and validated on fresh seeds.
McOutcome run_inequality_mc(InequalityKind kind, const Geometry& g,
                            Point2 center, double r, int n1 = 224,
                            int n2 = 160, const McConfig& cfg = {});

}  // namespace degenlab
