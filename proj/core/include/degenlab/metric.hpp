#pragma once

#include <vector>

#include "degenlab/geometry.hpp"

namespace degenlab {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

enum class Regime { Small, Large };

// Regime threshold is 1/|F'(x1)| in two dimensions and 2/|F'(x1)| for
// n >= 3; ties resolve to Small.
Regime ball_regime(const Geometry& g, int n, double x1, double r);

// r = integral of lambda / sqrt(lambda^2 - f(u)^2) over [x1, x_end].
// Requires lambda > f(x_end); the near-singular right endpoint is removed
// by the substitution u = x_end - v^2.
double geodesic_radius(const Geometry& g, double x1, double x_end,
                       double lambda);

// Radius of the geodesic that turns vertical at horizontal offset t, i.e.
// the same integral with lambda = f(x1 + t). Always >= t.
double turning_geodesic_radius(const Geometry& g, double x1, double t);

// h*(x1, t) = integral of f(u)^2 / sqrt(f(x1+t)^2 - f(u)^2) over [x1, x1+t]:
// the height reached by the geodesic turning at offset t.
double height_hstar(const Geometry& g, double x1, double t);

// r* in (0, r]: the turning offset whose geodesic has radius r. Found by
// bisection of the monotone map t -> turning radius; throws
// std::domain_error (bracket failure) when f is not strictly increasing.
double turning_offset(const Geometry& g, double x1, double r);

// lambda = f(x1 + r*), the implicit parameter of the bounding geodesic
double solve_lambda(const Geometry& g, double x1, double r);

struct HeightProfile {
  double h = 0.0;          // exact ball height h*(x1, r*)
  double r_star = 0.0;
  double lambda = 0.0;     // f(x1 + r*)
  double surrogate = 0.0;  // r f(x1) (Small) or f(x1+r)/|F'(x1+r)| (Large)
  Regime regime = Regime::Small;
};
HeightProfile rstar_and_height(const Geometry& g, double x1, double r);

// n=2: r^2 f(x1) (Small) or f(x1+r)/F'(x1+r)^2 (Large).
// n>=3: r^n f(x1) (Small) or f(x1+r)/|F'|^n * (r|F'|)^{n/2-1} at x1+r (Large).
double ball_volume(const Geometry& g, int n, double x1, double r);

// Cross-sectional volume s_r for n >= 3:
// r^{n-1} f(x1) below 2/|F'(x1)|, else f(x1+r) lambda^{n-2} / |F'(x1+r)|^n
// with lambda = sqrt(r |F'(x1+r)|).
double cross_section(const Geometry& g, int n, double x1, double r);

// r_{k+1} = r*(x1, r_k) while r_k >= 1/|F'(x1)|, else r_k / 2.
// Returns k_max + 1 strictly decreasing radii starting at r0.
std::vector<double> radius_sequence(const Geometry& g, double x1, double r0,
                                    int k_max);

// Forward cone: x1 <= y1 <= x1 + r and |y2 - x2| < h*(x1, y1 - x1).
bool cone_contains(const Geometry& g, Point2 x, Point2 y, double r);
// Dual cone Gamma*(y, r) = { x : y in Gamma(x, r) }; exact role swap.
bool dual_cone_contains(const Geometry& g, Point2 y, Point2 x, double r);

// d-hat = min(d, 1/|F'(x1 + d)|)
double clipped_distance(const Geometry& g, double x1, double d);

// Dyadic annulus E(x, r_outer) with inner radius r_inner:
// y1 - x1 in [r_inner, r_outer); lateral bound h*(x1, y1 - x1) when
// r_outer is in the Large regime, else the constant ball height
// h(x1, r_outer).
bool annulus_contains(const Geometry& g, Point2 x, double r_outer,
                      double r_inner, Point2 y);

// Two-dimensional subrepresentation kernel at distance dist = d(x, y):
// d-hat / |B(x1, d)| if y lies in the cone, else 0.
double kernel_K(const Geometry& g, Point2 x, Point2 y, double r, double dist);

// n >= 3 kernel in the cross-section form 1/s_{y1-x1} restricted to the
// product-annulus cone. Coordinate layout: [0] = x1, [1..n-2] = Euclidean
// transverse block, [n-1] = degenerate coordinate.
double kernel_K_nd(const Geometry& g, int n, const std::vector<double>& x,
                   const std::vector<double>& y, double r0);

struct AnnulusMeasure {
  int k = 0;
  double r_outer = 0.0;
  double r_inner = 0.0;
  double area_E = 0.0;   // grid-measured annulus area
  double area_B = 0.0;   // grid-measured area of B(x, r_outer)
  double ratio = 0.0;    // area_E / area_B
  Regime regime = Regime::Small;
};

// Grid-measures |E(x, r_k)| and |B(x, r_k)| for k = 0..k_max on per-radius
// fitted lattices of resolution about n1 x n2 cells.
std::vector<AnnulusMeasure> annulus_measures(const Geometry& g, Point2 x,
                                             double r0, int k_max,
                                             int n1 = 320, int n2 = 224);

struct StraightAcross {
  double integral = 0.0;
  double ratio = 0.0;  // integral / r
};

// Integral of the kernel over the dual cone Gamma*(x, r).
// n = 2: numeric cone on a fitted lattice (n1 x n2 nodes) with Dijkstra
// distances. n >= 3: analytic annulus sum; the large-branch integrand
// carries |F'|^{n-1} (one power less than the cross-section display, whose
// extra |F'| double-counts the degenerate thickness), the lateral extent is
// the ball height h(x1, r_k), and the n >= 3 threshold 2/|F'(x1)| selects
// both the kernel branch and the radius-sequence branch.
StraightAcross straight_across_integral(const Geometry& g, int n, Point2 x,
                                        double r, int n1 = 256, int n2 = 192);

}  // namespace degenlab
