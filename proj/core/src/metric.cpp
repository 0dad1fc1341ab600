#include "degenlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "degenlab/grid_oracle.hpp"
#include "degenlab/quadrature.hpp"

namespace degenlab {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1], positive half.
constexpr int kGLHalf = 8;
constexpr double kGLNode[kGLHalf] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGLWeight[kGLHalf] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

void check_ball(const Geometry& g, double x1, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!(x1 >= 0.0) || !(x1 + r < g.R())) {
    throw std::invalid_argument("ball leaves the domain");
  }
}

double abs_dF(const Geometry& g, double x1) { return std::fabs(g.dF(x1)); }

double regime_threshold(const Geometry& g, int n, double x1) {
  const double a = abs_dF(g, x1);
  const double base = n >= 3 ? 2.0 : 1.0;
  return a > 0.0 ? base / a : std::numeric_limits<double>::infinity();
}

// Smallest usable column >= desired: positive and with f^2 representable.
double left_clamp(const Geometry& g, double desired, double hi) {
  const double tiny = hi * 1e-9;
  double lo = std::max(desired, tiny);
  if (g.F(lo) <= 345.0) return lo;
  const double root =
      bisect([&](double x) { return 345.0 - g.F(x); }, lo, hi);
  return root + (hi - root) * 1e-6;
}

// Next radius of the dyadic sequence for dimension n.
double next_radius(const Geometry& g, int n, double x1, double r) {
  return r >= regime_threshold(g, n, x1) ? turning_offset(g, x1, r)
                                         : 0.5 * r;
}

// lambda - f(u) without cancellation, where u = x_end - width. Flat
// profiles make lambda and f(u) agree to many digits across the whole
// interval, so the difference is rebuilt in log space as
// f(u) expm1(F(u) - F_lambda). When the direct subtraction F(u) - F_lambda
// has itself lost too many digits, the gap is recovered as the integral of
// -F' over [x_end - width, x_end] by composite 16-point Gauss-Legendre
// (profiles are analytic away from u = 0, so a bounded panel count
// converges geometrically), plus the offset F(x_end) - F_lambda. The
// interval length enters through the exact `width`, never through the
// rounded endpoint u: near the turn, u quantizes to ulp(x_end) and the
// induced relative noise ~ ulp / width would dominate the gap. Callers
// that know lambda = f(x_end) must pass F_lambda = F(x_end) bitwise so
// the offset vanishes exactly.
class LambdaGap {
 public:
  LambdaGap(const Geometry& g, double x_end, double lambda, double F_lambda)
      : g_(g),
        x_end_(x_end),
        lambda_(lambda),
        F_lambda_(F_lambda),
        pe_(g.eval(x_end)) {}

  double operator()(const ProfileValues& pu, double u, double width) const {
    const double direct = pu.F - F_lambda_;
    if (direct > 1e-3 * (1.0 + std::fabs(F_lambda_))) {
      return direct > 1.0 ? lambda_ - pu.f : pu.f * std::expm1(direct);
    }
    if (!(width > 0.0)) return pu.f * std::expm1(std::max(direct, 0.0));
    const double base = std::max(pe_.F - F_lambda_, 0.0);
    const int k =
        std::min(8, std::max(1, static_cast<int>(std::ceil(width / u / 1.5))));
    const double half = 0.5 * width / k;
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
      const double mid = x_end_ - width * (i + 0.5) / k;
      double panel = 0.0;
      for (int q = 0; q < kGLHalf; ++q) {
        panel += kGLWeight[q] * (-g_.dF(mid - half * kGLNode[q]) -
                                 g_.dF(mid + half * kGLNode[q]));
      }
      sum += half * panel;
    }
    return pu.f * std::expm1(base + sum);
  }

 private:
  const Geometry& g_;
  double x_end_;
  double lambda_;
  double F_lambda_;
  ProfileValues pe_;
};

}  // namespace

Regime ball_regime(const Geometry& g, int n, double x1, double r) {
  check_ball(g, x1, r);
  return r <= regime_threshold(g, n, x1) ? Regime::Small : Regime::Large;
}

double geodesic_radius(const Geometry& g, double x1, double x_end,
                       double lambda) {
  if (!(x1 >= 0.0) || !(x_end >= x1) || !(x_end < g.R())) {
    throw std::invalid_argument("geodesic_radius: endpoints out of order");
  }
  if (x_end == x1) return 0.0;
  const ProfileValues pe = g.eval(x_end);
  const double fe = pe.f;
  if (!(lambda >= fe)) {
    throw std::domain_error("geodesic_radius: lambda below sup of f");
  }
  // u = x_end - v^2 removes the inverse-square-root endpoint singularity.
  const double fp_end = -pe.dF * fe;  // f'(x_end)
  const double F_lambda = lambda == fe ? pe.F : -std::log(lambda);
  const LambdaGap gap(g, x_end, lambda, F_lambda);
  auto integrand = [&](double v) {
    const double w = v * v;
    const double u = x_end - w;
    if (u <= 0.0) return 2.0 * v;  // f vanished: 2 v lambda / lambda
    const ProfileValues pu = g.eval(u);
    const double arg = gap(pu, u, w) * (lambda + pu.f);
    if (arg <= 0.0) {
      if (!(fp_end > 0.0)) {
        throw std::domain_error(
            "geodesic_radius: f not strictly increasing at the turn");
      }
      return 2.0 * lambda / std::sqrt(2.0 * fe * fp_end);
    }
    return 2.0 * v * lambda / std::sqrt(arg);
  };
  return integrate(integrand, 0.0, std::sqrt(x_end - x1), 1e-11);
}

double turning_geodesic_radius(const Geometry& g, double x1, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("offset must be positive");
  return geodesic_radius(g, x1, x1 + t, g.f(x1 + t));
}

double height_hstar(const Geometry& g, double x1, double t) {
  if (t == 0.0) return 0.0;
  if (!(t > 0.0) || !(x1 >= 0.0) || !(x1 + t < g.R())) {
    throw std::invalid_argument("height_hstar: offset out of range");
  }
  const ProfileValues pe = g.eval(x1 + t);
  const double lambda = pe.f;
  const double fp_end = -pe.dF * lambda;
  if (!(fp_end > 0.0)) {
    throw std::domain_error("height_hstar: f not strictly increasing");
  }
  const LambdaGap gap(g, x1 + t, lambda, pe.F);
  auto integrand = [&](double v) {
    const double w = v * v;
    const double u = x1 + t - w;
    if (u <= 0.0) return 0.0;  // f(u)^2 vanished
    const ProfileValues pu = g.eval(u);
    const double arg = gap(pu, u, w) * (lambda + pu.f);
    if (arg <= 0.0) return lambda * std::sqrt(2.0 * lambda / fp_end);
    return 2.0 * v * pu.f * pu.f / std::sqrt(arg);
  };
  return integrate(integrand, 0.0, std::sqrt(t), 1e-10);
}

double turning_offset(const Geometry& g, double x1, double r) {
  check_ball(g, x1, r);
  if (g.dF(x1 + r) >= 0.0) {
    throw std::domain_error(
        "turning_offset: bracket failure, f is not strictly increasing");
  }
  auto gap = [&](double t) { return turning_geodesic_radius(g, x1, t) - r; };
  if (gap(r) <= 0.0) return r;  // radius equals offset to quadrature accuracy
  double hi = r;
  double lo = 0.5 * r;
  while (gap(lo) > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < r * 1e-14) {
      throw std::domain_error("turning_offset: no bracket above zero");
    }
  }
  return bisect(gap, lo, hi, 1e-12);
}

double solve_lambda(const Geometry& g, double x1, double r) {
  return g.f(x1 + turning_offset(g, x1, r));
}

HeightProfile rstar_and_height(const Geometry& g, double x1, double r) {
  HeightProfile out;
  if (g.kind() == ProfileKind::Constant) {
    // Straight-line geodesics: the ball is the metric ellipse with
    // half-axes r and r f0, so the height needs no turning point.
    check_ball(g, x1, r);
    out.r_star = r;
    out.h = r * g.f(x1);
    out.lambda = g.f(x1);
    out.surrogate = out.h;
    out.regime = Regime::Small;
    return out;
  }
  out.r_star = turning_offset(g, x1, r);
  out.h = height_hstar(g, x1, out.r_star);
  out.lambda = g.f(x1 + out.r_star);
  out.regime = ball_regime(g, 2, x1, r);
  out.surrogate = out.regime == Regime::Small
                      ? r * g.f(x1)
                      : g.f(x1 + r) / abs_dF(g, x1 + r);
  return out;
}

double ball_volume(const Geometry& g, int n, double x1, double r) {
  if (n < 2) throw std::invalid_argument("ball_volume: n must be >= 2");
  check_ball(g, x1, r);
  const double thr = regime_threshold(g, n, x1);
  if (n == 2) {
    if (r <= thr) return r * r * g.f(x1);
    const double a = abs_dF(g, x1 + r);
    return g.f(x1 + r) / (a * a);
  }
  if (r <= thr) return std::pow(r, n) * g.f(x1);
  const double a = abs_dF(g, x1 + r);
  return g.f(x1 + r) / std::pow(a, n) *
         std::pow(r * a, 0.5 * n - 1.0);
}

double cross_section(const Geometry& g, int n, double x1, double r) {
  if (n < 3) throw std::invalid_argument("cross_section: n must be >= 3");
  check_ball(g, x1, r);
  const double thr = regime_threshold(g, n, x1);
  if (r < thr) return std::pow(r, n - 1) * g.f(x1);
  const double a = abs_dF(g, x1 + r);
  const double lambda = std::sqrt(r * a);
  return g.f(x1 + r) * std::pow(lambda, n - 2) / std::pow(a, n);
}

std::vector<double> radius_sequence(const Geometry& g, double x1, double r0,
                                    int k_max) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  check_ball(g, x1, r0);
  std::vector<double> rs;
  rs.reserve(static_cast<std::size_t>(k_max) + 1);
  rs.push_back(r0);
  for (int k = 0; k < k_max; ++k) {
    const double next = next_radius(g, 2, x1, rs.back());
    if (!(next < rs.back()) || !(next > 0.0)) {
      throw std::runtime_error("radius_sequence: sequence not decreasing");
    }
    rs.push_back(next);
  }
  return rs;
}

bool cone_contains(const Geometry& g, Point2 x, Point2 y, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const double dy1 = y.x1 - x.x1;
  if (dy1 < 0.0 || dy1 > r) return false;
  if (dy1 == 0.0) return false;  // zero-height ray
  if (!(x.x1 + dy1 < g.R())) return false;
  return std::fabs(y.x2 - x.x2) < height_hstar(g, x.x1, dy1);
}

bool dual_cone_contains(const Geometry& g, Point2 y, Point2 x, double r) {
  return cone_contains(g, x, y, r);
}

double clipped_distance(const Geometry& g, double x1, double d) {
  if (!(d > 0.0)) return 0.0;
  if (!(x1 + d < g.R())) {
    throw std::invalid_argument("clipped_distance: point leaves the domain");
  }
  const double a = abs_dF(g, x1 + d);
  return a > 0.0 ? std::min(d, 1.0 / a) : d;
}

bool annulus_contains(const Geometry& g, Point2 x, double r_outer,
                      double r_inner, Point2 y) {
  if (!(r_inner >= 0.0) || !(r_outer > r_inner)) {
    throw std::invalid_argument("annulus_contains: bad radii");
  }
  const double dy1 = y.x1 - x.x1;
  if (dy1 < r_inner || dy1 >= r_outer) return false;
  const double bound =
      ball_regime(g, 2, x.x1, r_outer) == Regime::Large
          ? height_hstar(g, x.x1, dy1)
          : rstar_and_height(g, x.x1, r_outer).h;
  return std::fabs(y.x2 - x.x2) < bound;
}

double kernel_K(const Geometry& g, Point2 x, Point2 y, double r,
                double dist) {
  if (!(dist > 0.0) || dist >= r) return 0.0;
  if (!cone_contains(g, x, y, r)) return 0.0;
  return clipped_distance(g, x.x1, dist) / ball_volume(g, 2, x.x1, dist);
}

double kernel_K_nd(const Geometry& g, int n, const std::vector<double>& x,
                   const std::vector<double>& y, double r0) {
  if (n < 3) throw std::invalid_argument("kernel_K_nd: n must be >= 3");
  if (x.size() != static_cast<std::size_t>(n) || y.size() != x.size()) {
    throw std::invalid_argument("kernel_K_nd: coordinate size mismatch");
  }
  check_ball(g, x[0], r0);
  const double dy1 = y[0] - x[0];
  if (!(dy1 > 0.0) || dy1 > r0) return 0.0;
  // Annulus index: largest k with r_{k+1} < dy1 <= r_k.
  double r_outer = r0;
  double r_inner = next_radius(g, n, x[0], r_outer);
  for (int k = 0; r_inner >= dy1; ++k) {
    r_outer = r_inner;
    r_inner = next_radius(g, n, x[0], r_outer);
    if (k > 4000) throw std::runtime_error("kernel_K_nd: sequence stalled");
  }
  double transverse2 = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double s = y[i] - x[i];
    transverse2 += s * s;
  }
  if (transverse2 > (r_outer - r_inner) * (r_outer + r_inner)) return 0.0;
  const double height = rstar_and_height(g, x[0], r_outer).h;
  if (std::fabs(y[n - 1] - x[n - 1]) > height) return 0.0;
  return 1.0 / cross_section(g, n, x[0], dy1);
}

std::vector<AnnulusMeasure> annulus_measures(const Geometry& g, Point2 x,
                                             double r0, int k_max, int n1,
                                             int n2) {
  if (n1 < 16 || n2 < 16) {
    throw std::invalid_argument("annulus_measures: lattice too coarse");
  }
  const std::vector<double> rs = radius_sequence(g, x.x1, r0, k_max + 1);
  std::vector<AnnulusMeasure> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    const double rk = rs[k];
    const double rk1 = rs[k + 1];
    const Regime regime = ball_regime(g, 2, x.x1, rk);
    const double h_ball = rstar_and_height(g, x.x1, rk).h;
    const double h_lat =
        regime == Regime::Large ? height_hstar(g, x.x1, rk) : h_ball;
    const double envelope = std::max(h_ball, h_lat);

    GridSpec spec;
    const double right = std::min(x.x1 + 1.05 * rk, g.R() * (1.0 - 1e-9));
    const double left = left_clamp(g, x.x1 - 1.05 * rk, x.x1);
    spec.x0 = left;
    spec.h1 = (right - left) / (n1 - 1);
    spec.n1 = n1;
    spec.y0 = x.x2 - 1.25 * envelope;
    spec.h2 = 2.5 * envelope / (n2 - 1);
    spec.n2 = n2;
    GridOracle oracle(g, spec);
    const DistanceField field = oracle.distances(x.x1, x.x2);

    // Per-column lateral bound of E; quadrature only inside the band.
    std::vector<double> bound(n1, -1.0);
    for (int i = 0; i < n1; ++i) {
      const double tau = spec.x1(i) - x.x1;
      if (tau < rk1 || tau >= rk) continue;
      bound[i] = regime == Regime::Large ? height_hstar(g, x.x1, tau)
                                         : h_ball;
    }
    std::vector<char> in_e(static_cast<std::size_t>(n1) * n2, 0);
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        if (bound[i] < 0.0) continue;
        in_e[spec.index(i, j)] =
            std::fabs(spec.x2(j) - x.x2) < bound[i] ? 1 : 0;
      }
    }
    std::size_t cells = 0;
    for (int j = 0; j + 1 < n2; ++j) {
      for (int i = 0; i + 1 < n1; ++i) {
        const int inside = in_e[spec.index(i, j)] +
                           in_e[spec.index(i + 1, j)] +
                           in_e[spec.index(i, j + 1)] +
                           in_e[spec.index(i + 1, j + 1)];
        if (inside >= 2) ++cells;
      }
    }
    AnnulusMeasure m;
    m.k = k;
    m.r_outer = rk;
    m.r_inner = rk1;
    m.area_E = static_cast<double>(cells) * spec.h1 * spec.h2;
    m.area_B = GridOracle::ball_area(field, rk);
    m.ratio = m.area_B > 0.0 ? m.area_E / m.area_B
                             : std::numeric_limits<double>::quiet_NaN();
    m.regime = regime;
    out.push_back(m);
  }
  return out;
}

namespace {

StraightAcross straight_across_2d(const Geometry& g, Point2 apex, double r,
                                  int n1, int n2) {
  const double hi = apex.x1;
  const double left = left_clamp(g, apex.x1 - 1.02 * r, hi);
  const double right = apex.x1 + 0.02 * r;
  if (!(right < g.R())) {
    throw std::invalid_argument("straight_across: window leaves the domain");
  }
  // Vertical envelope: sample the dual-cone column heights.
  double envelope = 0.0;
  for (int s = 1; s <= 16; ++s) {
    const double tau = r * s / 16.0;
    const double col = apex.x1 - tau;
    if (col <= left) break;
    envelope = std::max(envelope, height_hstar(g, col, tau));
  }
  if (!(envelope > 0.0)) {
    throw std::runtime_error("straight_across: empty dual cone");
  }
  GridSpec spec;
  spec.x0 = left;
  spec.h1 = (right - left) / (n1 - 1);
  spec.n1 = n1;
  spec.y0 = apex.x2 - 1.25 * envelope;
  spec.h2 = 2.5 * envelope / (n2 - 1);
  spec.n2 = n2;
  GridOracle oracle(g, spec);
  const DistanceField field = oracle.distances(apex.x1, apex.x2);

  // Column cache: height of the cone from (x1_i, .) that reaches the apex.
  std::vector<double> hst(n1, -1.0);
  for (int i = 0; i < n1; ++i) {
    const double tau = apex.x1 - spec.x1(i);
    if (tau <= 0.0 || tau > r) continue;
    hst[i] = height_hstar(g, spec.x1(i), tau);
  }
  double integral = 0.0;
  const double cell = spec.h1 * spec.h2;
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      if (hst[i] < 0.0) continue;
      if (std::fabs(spec.x2(j) - apex.x2) >= hst[i]) continue;
      const double d = field.at(i, j);
      if (!(d > 0.0) || d >= r) continue;
      const double x1i = spec.x1(i);
      integral += clipped_distance(g, x1i, d) /
                  ball_volume(g, 2, x1i, d) * cell;
    }
  }
  return {integral, integral / r};
}

StraightAcross straight_across_nd(const Geometry& g, int n, double x1,
                                  double r) {
  const double thr = regime_threshold(g, n, x1);
  const double f0 = g.f(x1);
  double integral = 0.0;
  double rk = r;
  for (int k = 0; k < 80 && rk > r * 2e-7; ++k) {
    const HeightProfile hp = rstar_and_height(g, x1, rk);
    const double rk1 = rk >= thr ? hp.r_star : 0.5 * rk;
    const double transverse =
        std::pow((rk - rk1) * (rk + rk1), 0.5 * n - 1.0);
    // Kernel integral over the annulus band; the large branch carries
    // |F'|^{n-1} (see header note on the cross-section display).
    auto kern = [&](double tau) {
      if (tau < thr) return 1.0 / (std::pow(tau, n - 1) * f0);
      const double a = abs_dF(g, x1 + tau);
      return std::pow(a, n - 1) /
             (g.f(x1 + tau) * std::pow(tau * a, 0.5 * n - 1.0));
    };
    const double mid = 0.5 * (rk + rk1);
    const double half = 0.5 * (rk - rk1);
    double band = 0.0;
    for (int q = 0; q < kGLHalf; ++q) {
      band += kGLWeight[q] *
              (kern(mid - half * kGLNode[q]) + kern(mid + half * kGLNode[q]));
    }
    band *= half;
    integral += transverse * 2.0 * hp.h * band;
    rk = rk1;
  }
  return {integral, integral / r};
}

}  // namespace

StraightAcross straight_across_integral(const Geometry& g, int n, Point2 x,
                                        double r, int n1, int n2) {
  if (n < 2) throw std::invalid_argument("straight_across: n must be >= 2");
  check_ball(g, x.x1, r);
  if (n == 2) {
    if (n1 < 32 || n2 < 32) {
      throw std::invalid_argument("straight_across: lattice too coarse");
    }
    return straight_across_2d(g, x, r, n1, n2);
  }
  return straight_across_nd(g, n, x.x1, r);
}

}  // namespace degenlab
