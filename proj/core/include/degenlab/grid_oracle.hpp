#pragma once

#include <cstdint>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degenlab {

// Node lattice: x1_i = x0 + i*h1 (i < n1), x2_j = y0 + j*h2 (j < n2).
struct GridSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  int n1 = 0;
  int n2 = 0;

  double x1(int i) const { return x0 + i * h1; }
  double x2(int j) const { return y0 + j * h2; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * n1 + i;
  }
};

struct DistanceField {
  GridSpec spec;
  int src_i = 0;
  int src_j = 0;
  std::vector<double> d;  // row-major, d[spec.index(i, j]]

  double at(int i, int j) const { return d[spec.index(i, j)]; }
};

// Shortest-path oracle for the control distance of the metric
// dx1^2 + dx2^2 / f(x1)^2. Edges use a 16-neighbour stencil (axis,
// diagonal and knight moves); each edge weight is the metric length of the
// straight segment, with 1/f integrated along x1 by Simpson's rule on the
// precomputed column values. Worst-case directional overestimate of the
// stencil is about 1.3 percent.
class GridOracle {
 public:
  GridOracle(const Geometry& g, const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }

  // Dijkstra from the node nearest to (sx1, sx2).
  DistanceField distances(double sx1, double sx2) const;

  // Area of {d < r} by cells with at least 2 of 4 corner nodes inside.
  static double ball_area(const DistanceField& field, double r);
  static std::size_t ball_node_count(const DistanceField& field, double r);

 private:
  GridSpec spec_;
  std::vector<double> qcol_;   // 1/f at column i
  std::vector<double> qhalf_;  // 1/f at column i + h1/2
};

}  // namespace degenlab
