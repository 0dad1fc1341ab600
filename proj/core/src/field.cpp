#include "degenlab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace degenlab {

DiscreteField sample_field(const GridSpec& spec,
                           const std::function<double(double, double)>& fn) {
  DiscreteField out(spec);
  for (int j = 0; j < spec.n2; ++j) {
    for (int i = 0; i < spec.n1; ++i) {
      out.at(i, j) = fn(spec.x1(i), spec.x2(j));
    }
  }
  return out;
}

AGradient a_gradient(const Geometry& g, const DiscreteField& u) {
  const GridSpec& s = u.spec;
  if (s.n1 < 2 || s.n2 < 2) {
    throw std::invalid_argument("a_gradient: lattice too small");
  }
  AGradient out{DiscreteField(s), DiscreteField(s)};
  for (int j = 0; j < s.n2; ++j) {
    for (int i = 0; i < s.n1; ++i) {
      double d1;
      if (i == 0) {
        d1 = (u.at(1, j) - u.at(0, j)) / s.h1;
      } else if (i == s.n1 - 1) {
        d1 = (u.at(i, j) - u.at(i - 1, j)) / s.h1;
      } else {
        d1 = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * s.h1);
      }
      double d2;
      if (j == 0) {
        d2 = (u.at(i, 1) - u.at(i, 0)) / s.h2;
      } else if (j == s.n2 - 1) {
        d2 = (u.at(i, j) - u.at(i, j - 1)) / s.h2;
      } else {
        d2 = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * s.h2);
      }
      out.d1.at(i, j) = d1;
      out.d2.at(i, j) = g.f(s.x1(i)) * d2;
    }
  }
  return out;
}

DiscreteField a_gradient_norm(const Geometry& g, const DiscreteField& u) {
  const AGradient grad = a_gradient(g, u);
  DiscreteField out(u.spec);
  for (std::size_t p = 0; p < out.v.size(); ++p) {
    out.v[p] = std::hypot(grad.d1.v[p], grad.d2.v[p]);
  }
  return out;
}

double node_integral(const DiscreteField& u) {
  double sum = 0.0;
  for (const double w : u.v) sum += w;
  return sum * u.spec.h1 * u.spec.h2;
}

double node_integral_masked(const DiscreteField& u,
                            const std::vector<char>& mask) {
  if (mask.size() != u.v.size()) {
    throw std::invalid_argument("node_integral_masked: mask size mismatch");
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < u.v.size(); ++p) {
    if (mask[p]) sum += u.v[p];
  }
  return sum * u.spec.h1 * u.spec.h2;
}

double mask_area_cells(const GridSpec& spec, const std::vector<char>& mask) {
  if (mask.size() != static_cast<std::size_t>(spec.n1) * spec.n2) {
    throw std::invalid_argument("mask_area_cells: mask size mismatch");
  }
  std::size_t cells = 0;
  for (int j = 0; j + 1 < spec.n2; ++j) {
    for (int i = 0; i + 1 < spec.n1; ++i) {
      const int inside = (mask[spec.index(i, j)] != 0) +
                         (mask[spec.index(i + 1, j)] != 0) +
                         (mask[spec.index(i, j + 1)] != 0) +
                         (mask[spec.index(i + 1, j + 1)] != 0);
      if (inside >= 2) ++cells;
    }
  }
  return static_cast<double>(cells) * spec.h1 * spec.h2;
}

}  // namespace degenlab
