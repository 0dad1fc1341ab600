#pragma once

#include <functional>
#include <vector>

#include "degenlab/geometry.hpp"
#include "degenlab/grid_oracle.hpp"

namespace degenlab {

struct DiscreteField {
  GridSpec spec;
  std::vector<double> v;

  DiscreteField() = default;
  explicit DiscreteField(const GridSpec& s)
      : spec(s), v(static_cast<std::size_t>(s.n1) * s.n2, 0.0) {}

  double at(int i, int j) const { return v[spec.index(i, j)]; }
  double& at(int i, int j) { return v[spec.index(i, j)]; }
};

DiscreteField sample_field(const GridSpec& spec,
                           const std::function<double(double, double)>& fn);

// Components of the adapted gradient (d/dx1, f(x1) d/dx2): centred
// differences in the interior, one-sided on the lattice edges.
struct AGradient {
  DiscreteField d1;
  DiscreteField d2;
};
AGradient a_gradient(const Geometry& g, const DiscreteField& u);
DiscreteField a_gradient_norm(const Geometry& g, const DiscreteField& u);

// Node-sum quadrature: sum of values times the cell area.
double node_integral(const DiscreteField& u);
double node_integral_masked(const DiscreteField& u,
                            const std::vector<char>& mask);

// Area of a node mask by cells with at least 2 of 4 corners set.
double mask_area_cells(const GridSpec& spec, const std::vector<char>& mask);

}  // namespace degenlab
