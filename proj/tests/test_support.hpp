#pragma once

#include <cmath>
#include <algorithm>

#include <degenlab/field.hpp>
#include <degenlab/grid_oracle.hpp>

namespace degenlab::testing {

// Relative gap, symmetric in a and b. Zero-safe: rel(0, 0) = 0.
inline double rel_err(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale == 0.0) return 0.0;
  return std::fabs(a - b) / scale;
}

// Ball-centered lattice matching the Monte Carlo window layout: 2.6r wide
// in x1, vertical extent from the height envelope at 2r.
inline GridSpec ball_window(const Geometry& g, double cx, double henv,
                            double r, int n1, int n2) {
  GridSpec spec;
  spec.x0 = cx - 2.6 * r;
  spec.y0 = -1.3 * henv;
  spec.n1 = n1;
  spec.n2 = n2;
  spec.h1 = 5.2 * r / (n1 - 1);
  spec.h2 = 2.6 * henv / (n2 - 1);
  return spec;
}

}  // namespace degenlab::testing
