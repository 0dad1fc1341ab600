#include "degenlab/grid_oracle.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace degenlab {

namespace {

// Simpson weight of a straight segment whose 1/f values at the two ends
// and the x1-midpoint are q0, qm, q1.
double segment_weight(double dx1, double dx2, double q0, double qm,
                      double q1) {
  const double g0 = std::hypot(dx1, dx2 * q0);
  const double gm = std::hypot(dx1, dx2 * qm);
  const double g1 = std::hypot(dx1, dx2 * q1);
  return (g0 + 4.0 * gm + g1) / 6.0;
}

}  // namespace

GridOracle::GridOracle(const Geometry& g, const GridSpec& spec) : spec_(spec) {
  if (spec.n1 < 3 || spec.n2 < 3) {
    throw std::invalid_argument("GridOracle: lattice must be at least 3x3");
  }
  if (!(spec.h1 > 0.0) || !(spec.h2 > 0.0)) {
    throw std::invalid_argument("GridOracle: spacings must be positive");
  }
  const double x_right = spec.x1(spec.n1 - 1);
  if (!(spec.x0 > 0.0) || !(x_right < g.R())) {
    throw std::invalid_argument("GridOracle: columns leave the domain");
  }
  // f(x0)^2 must stay representable; F is decreasing in x1, so the left
  // edge is the binding column.
  if (g.F(spec.x0) > 345.0) {
    throw std::domain_error(
        "GridOracle: f^2 underflows at the left edge; shrink the window");
  }
  qcol_.resize(spec.n1);
  qhalf_.resize(spec.n1 - 1);
  for (int i = 0; i < spec.n1; ++i) qcol_[i] = 1.0 / g.f(spec.x1(i));
  for (int i = 0; i + 1 < spec.n1; ++i) {
    qhalf_[i] = 1.0 / g.f(spec.x1(i) + 0.5 * spec.h1);
  }
}

DistanceField GridOracle::distances(double sx1, double sx2) const {
  const GridSpec& s = spec_;
  auto clamp_idx = [](double v, int n) {
    const int i = static_cast<int>(std::lround(v));
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
  };
  DistanceField out;
  out.spec = s;
  out.src_i = clamp_idx((sx1 - s.x0) / s.h1, s.n1);
  out.src_j = clamp_idx((sx2 - s.y0) / s.h2, s.n2);

  // Column-indexed weight tables; a leftward move reuses the table entry of
  // its own left column.
  std::vector<double> w_vert(s.n1), w_diag(s.n1 - 1), w_k12(s.n1 - 1);
  std::vector<double> w_k21(s.n1 > 2 ? s.n1 - 2 : 0);
  for (int i = 0; i < s.n1; ++i) w_vert[i] = s.h2 * qcol_[i];
  for (int i = 0; i + 1 < s.n1; ++i) {
    w_diag[i] = segment_weight(s.h1, s.h2, qcol_[i], qhalf_[i], qcol_[i + 1]);
    w_k12[i] =
        segment_weight(s.h1, 2.0 * s.h2, qcol_[i], qhalf_[i], qcol_[i + 1]);
  }
  for (int i = 0; i + 2 < s.n1; ++i) {
    w_k21[i] = segment_weight(2.0 * s.h1, s.h2, qcol_[i], qcol_[i + 1],
                              qcol_[i + 2]);
  }

  const double inf = std::numeric_limits<double>::infinity();
  out.d.assign(static_cast<std::size_t>(s.n1) * s.n2, inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  const std::size_t src = s.index(out.src_i, out.src_j);
  out.d[src] = 0.0;
  heap.push({0.0, src});

  struct Move {
    int di, dj;
  };
  static constexpr Move kMoves[16] = {
      {1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
      {1, 2},  {1, -2}, {-1, 2}, {-1, -2}, {2, 1}, {2, -1}, {-2, 1}, {-2, -1}};

  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (du > out.d[u]) continue;
    const int i = static_cast<int>(u % s.n1);
    const int j = static_cast<int>(u / s.n1);
    for (const Move& m : kMoves) {
      const int ii = i + m.di;
      const int jj = j + m.dj;
      if (ii < 0 || ii >= s.n1 || jj < 0 || jj >= s.n2) continue;
      const int left = m.di < 0 ? ii : i;
      double w;
      if (m.di == 0) {
        w = w_vert[i];
      } else if (m.dj == 0) {
        w = s.h1;
      } else if (std::abs(m.di) == 1 && std::abs(m.dj) == 1) {
        w = w_diag[left];
      } else if (std::abs(m.di) == 1) {
        w = w_k12[left];
      } else {
        w = w_k21[left];
      }
      const std::size_t v = s.index(ii, jj);
      const double cand = du + w;
      if (cand < out.d[v]) {
        out.d[v] = cand;
        heap.push({cand, v});
      }
    }
  }
  return out;
}

double GridOracle::ball_area(const DistanceField& field, double r) {
  const GridSpec& s = field.spec;
  std::size_t cells = 0;
  for (int j = 0; j + 1 < s.n2; ++j) {
    for (int i = 0; i + 1 < s.n1; ++i) {
      const int inside = (field.at(i, j) < r) + (field.at(i + 1, j) < r) +
                         (field.at(i, j + 1) < r) +
                         (field.at(i + 1, j + 1) < r);
      if (inside >= 2) ++cells;
    }
  }
  return static_cast<double>(cells) * s.h1 * s.h2;
}

std::size_t GridOracle::ball_node_count(const DistanceField& field, double r) {
  std::size_t count = 0;
  for (const double v : field.d) {
    if (v < r) ++count;
  }
  return count;
}

}  // namespace degenlab
