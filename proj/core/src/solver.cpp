#include "degenlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace degenlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

GridSpec cell_lattice(const Geometry& g, double x1_lo, double x1_hi,
                      double x2_lo, double x2_hi, int n1, int n2) {
  if (!(0.0 < x1_lo) || !(x1_lo < x1_hi) || !(x1_hi < g.R()) ||
      !(x2_lo < x2_hi)) {
    throw std::invalid_argument("cell_lattice: bad rectangle");
  }
  if (n1 < 3 || n2 < 3) {
    throw std::invalid_argument("cell_lattice: need at least 3x3 cells");
  }
  if (g.F(x1_lo) > 345.0) {
    throw std::domain_error(
        "cell_lattice: f^2 underflows on the rectangle; out of numeric "
        "range");
  }
  GridSpec spec;
  spec.h1 = (x1_hi - x1_lo) / n1;
  spec.h2 = (x2_hi - x2_lo) / n2;
  spec.x0 = x1_lo + 0.5 * spec.h1;
  spec.y0 = x2_lo + 0.5 * spec.h2;
  spec.n1 = n1;
  spec.n2 = n2;
  return spec;
}

struct FactoredProblem::Impl {
  Geometry g;
  GridSpec cells;
  double x1_lo, x1_hi, x2_lo, x2_hi;
  std::vector<double> fsq;  // f(x1_i)^2 per column
  Eigen::SparseMatrix<double> A;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  mutable double residual = 0.0;

  Impl(const Geometry& geometry, double a1, double b1, double a2, double b2,
       int n1, int n2)
      : g(geometry),
        cells(cell_lattice(geometry, a1, b1, a2, b2, n1, n2)),
        x1_lo(a1),
        x1_hi(b1),
        x2_lo(a2),
        x2_hi(b2) {
    fsq.resize(n1);
    for (int i = 0; i < n1; ++i) {
      const double fv = g.f(cells.x1(i));
      fsq[i] = fv * fv;
      if (!(fsq[i] > 0.0)) {
        throw std::domain_error("assemble: degenerate row, f^2 underflows");
      }
    }
    const double ch = 1.0 / (cells.h1 * cells.h1);
    const double cv = 1.0 / (cells.h2 * cells.h2);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n1) * n2 * 5);
    auto idx = [&](int i, int j) {
      return static_cast<int>(cells.index(i, j));
    };
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const int c = idx(i, j);
        double diag = 0.0;
        // Horizontal faces, coefficient 1; ghost faces double the weight.
        diag += i == 0 ? 2.0 * ch : ch;
        diag += i == n1 - 1 ? 2.0 * ch : ch;
        if (i > 0) trips.emplace_back(c, idx(i - 1, j), -ch);
        if (i < n1 - 1) trips.emplace_back(c, idx(i + 1, j), -ch);
        // Vertical faces, coefficient f(x1_i)^2 (x2-independent).
        const double w = fsq[i] * cv;
        diag += j == 0 ? 2.0 * w : w;
        diag += j == n2 - 1 ? 2.0 * w : w;
        if (j > 0) trips.emplace_back(c, idx(i, j - 1), -w);
        if (j < n2 - 1) trips.emplace_back(c, idx(i, j + 1), -w);
        trips.emplace_back(c, c, diag);
      }
    }
    const int N = n1 * n2;
    A.resize(N, N);
    A.setFromTriplets(trips.begin(), trips.end());
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("assemble: factorization failed");
    }
  }
};

FactoredProblem::FactoredProblem(const Geometry& g, double x1_lo,
                                 double x1_hi, double x2_lo, double x2_hi,
                                 int n1, int n2)
    : impl_(new Impl(g, x1_lo, x1_hi, x2_lo, x2_hi, n1, n2)) {}
FactoredProblem::~FactoredProblem() = default;
FactoredProblem::FactoredProblem(FactoredProblem&&) noexcept = default;
FactoredProblem& FactoredProblem::operator=(FactoredProblem&&) noexcept =
    default;

const GridSpec& FactoredProblem::cells() const { return impl_->cells; }
double FactoredProblem::last_residual() const { return impl_->residual; }

DiscreteField FactoredProblem::solve(
    const std::function<double(double, double)>& g) const {
  const Impl& im = *impl_;
  const GridSpec& s = im.cells;
  const double ch = 2.0 / (s.h1 * s.h1);
  const double cv = 2.0 / (s.h2 * s.h2);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s.n1 * s.n2);
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -gmin;
  auto bval = [&](double x1, double x2) {
    const double v = g(x1, x2);
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
    return v;
  };
  for (int j = 0; j < s.n2; ++j) {
    b[s.index(0, j)] += ch * bval(im.x1_lo, s.x2(j));
    b[s.index(s.n1 - 1, j)] += ch * bval(im.x1_hi, s.x2(j));
  }
  for (int i = 0; i < s.n1; ++i) {
    b[s.index(i, 0)] += cv * im.fsq[i] * bval(s.x1(i), im.x2_lo);
    b[s.index(i, s.n2 - 1)] += cv * im.fsq[i] * bval(s.x1(i), im.x2_hi);
  }
  Eigen::VectorXd u = im.ldlt.solve(b);
  if (im.ldlt.info() != Eigen::Success) {
    throw std::runtime_error("solve: back-substitution failed");
  }
  const double bn = b.norm();
  im.residual = (im.A * u - b).norm() / (bn > 0.0 ? bn : 1.0);
  if (im.residual > 1e-14) {  // one refinement step against anisotropy
    u += im.ldlt.solve(b - im.A * u);
    im.residual = (im.A * u - b).norm() / (bn > 0.0 ? bn : 1.0);
  }

  const double slack = 1e-10 * std::max(1.0, gmax - gmin);
  const double umin = u.minCoeff();
  const double umax = u.maxCoeff();
  if (umin < gmin - slack || umax > gmax + slack) {
    throw std::runtime_error("solve: discrete maximum principle violated");
  }
  DiscreteField out(s);
  for (int p = 0; p < u.size(); ++p) out.v[p] = u[p];
  return out;
}

SolveResult solve(const DegenerateProblem& p) {
  if (!p.boundary) {
    throw std::invalid_argument("solve: boundary data missing");
  }
  FactoredProblem fp(p.geometry, p.x1_lo, p.x1_hi, p.x2_lo, p.x2_hi, p.n1,
                     p.n2);
  SolveResult out;
  out.u = fp.solve(p.boundary);
  out.residual = fp.last_residual();
  out.iterations = 1;  // direct factorization
  const DiscreteField gn = a_gradient_norm(p.geometry, out.u);
  double e = 0.0;
  for (const double w : gn.v) e += w * w;
  out.energy = e * gn.spec.h1 * gn.spec.h2;
  return out;
}

std::vector<DiscreteField> truncation_cascade(const DiscreteField& v,
                                              int k_max) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  double vmax = -std::numeric_limits<double>::infinity();
  for (const double w : v.v) vmax = std::max(vmax, w);
  if (vmax > 1.0 + 1e-12) {
    throw std::domain_error("truncation_cascade: max v exceeds 1");
  }
  std::vector<DiscreteField> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    DiscreteField w(v.spec);
    const double scale = std::ldexp(1.0, k);  // 2^k
    for (std::size_t p = 0; p < v.v.size(); ++p) {
      w.v[p] = scale * (v.v[p] - 1.0) + 1.0;
    }
    out.push_back(std::move(w));
  }
  for (int k = 0; k + 1 <= k_max; ++k) {
    for (std::size_t p = 0; p < v.v.size(); ++p) {
      if (std::fabs(out[k + 1].v[p] - (2.0 * out[k].v[p] - 1.0)) > 1e-12) {
        throw std::runtime_error("truncation_cascade: recursion broken");
      }
    }
  }
  return out;
}

double oscillation(const DiscreteField& u, const DistanceField& dist,
                   double r) {
  if (u.spec.n1 != dist.spec.n1 || u.spec.n2 != dist.spec.n2) {
    throw std::invalid_argument("oscillation: lattice mismatch");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t count = 0;
  for (std::size_t p = 0; p < u.v.size(); ++p) {
    if (dist.d[p] < r) {
      lo = std::min(lo, u.v[p]);
      hi = std::max(hi, u.v[p]);
      ++count;
    }
  }
  if (count < 16) {
    throw std::runtime_error(
        "oscillation: fewer than 16 nodes inside the ball");
  }
  return hi - lo;
}

OscillationReport oscillation_decay_run(
    const DegenerateProblem& p, Point2 x, double r0, int levels,
    const std::function<double(double)>& lambda_of_r) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (x.x1 - 3.0 * r0 < p.x1_lo || x.x1 + 3.0 * r0 > p.x1_hi) {
    throw std::invalid_argument(
        "oscillation_decay_run: B(x, 3 r0) leaves the rectangle");
  }
  const double hh = rstar_and_height(p.geometry, x.x1, 3.0 * r0).h;
  if (x.x2 - hh < p.x2_lo || x.x2 + hh > p.x2_hi) {
    throw std::invalid_argument(
        "oscillation_decay_run: B(x, 3 r0) leaves the rectangle");
  }
  const SolveResult sr = solve(p);
  GridOracle oracle(p.geometry, sr.u.spec);
  const DistanceField dist = oracle.distances(x.x1, x.x2);

  OscillationReport rep;
  rep.center = x;
  double prev = kNaN;
  for (int l = 0; l < levels; ++l) {
    const double r = r0 * std::ldexp(1.0, -l);
    OscillationLevel lev;
    lev.level = l;
    lev.r = r;
    lev.osc = oscillation(sr.u, dist, r);
    lev.nodes = GridOracle::ball_node_count(dist, r);
    lev.ratio = l == 0 ? kNaN : (prev > 0.0 ? lev.osc / prev : kNaN);
    lev.predicted_cap = lambda_of_r ? 1.0 - 0.5 * lambda_of_r(r) : kNaN;
    if (l > 0 && lev.osc > prev) {
      throw std::logic_error("oscillation_decay_run: osc not monotone");
    }
    prev = lev.osc;
    rep.levels.push_back(lev);
  }

  // Half-measure bookkeeping for v = (2/osc)(u - (sup+inf)/2) on B(x, r0).
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t q = 0; q < sr.u.v.size(); ++q) {
    if (dist.d[q] < r0) {
      lo = std::min(lo, sr.u.v[q]);
      hi = std::max(hi, sr.u.v[q]);
    }
  }
  const double osc0 = hi - lo;
  std::size_t n_all = 0;
  std::size_t n_le = 0;
  const double mid = 0.5 * (hi + lo);
  for (std::size_t q = 0; q < sr.u.v.size(); ++q) {
    if (dist.d[q] < r0) {
      ++n_all;
      const double v = osc0 > 0.0 ? 2.0 / osc0 * (sr.u.v[q] - mid) : 0.0;
      if (v <= 0.0) ++n_le;
    }
  }
  rep.lower_half = 2 * n_le >= n_all;
  return rep;
}

}  // namespace degenlab
