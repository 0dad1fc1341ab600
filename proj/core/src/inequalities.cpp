#include "degenlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "degenlab/solver.hpp"

namespace degenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

void check_same_lattice(const GridSpec& a, const GridSpec& b,
                        const char* who) {
  if (a.n1 != b.n1 || a.n2 != b.n2) {
    throw std::invalid_argument(std::string(who) + ": lattice mismatch");
  }
}

std::vector<char> ball_mask(const DistanceField& dist, double r) {
  std::vector<char> mask(dist.d.size(), 0);
  for (std::size_t p = 0; p < dist.d.size(); ++p) {
    mask[p] = dist.d[p] < r ? 1 : 0;
  }
  return mask;
}

void fill_constant(InequalityReport& rep) {
  if (rep.rhs > 0.0) {
    rep.implied_constant = rep.lhs / rep.rhs;
  } else {
    rep.indeterminate = true;
    rep.implied_constant = 0.0;
  }
}

}  // namespace

bool ball_inside_grid(const DistanceField& dist, double r) {
  const GridSpec& s = dist.spec;
  for (int i = 0; i < s.n1; ++i) {
    if (dist.at(i, 0) < r || dist.at(i, s.n2 - 1) < r) return false;
  }
  for (int j = 0; j < s.n2; ++j) {
    if (dist.at(0, j) < r || dist.at(s.n1 - 1, j) < r) return false;
  }
  return true;
}

InequalityReport poincare_trial(const Geometry& g, const DiscreteField& w,
                                const DistanceField& dist, double r) {
  check_same_lattice(w.spec, dist.spec, "poincare_trial");
  if (!ball_inside_grid(dist, 2.0 * r)) {
    throw std::invalid_argument("poincare_trial: 2B leaves the grid");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p < w.v.size(); ++p) {
    if (dist.d[p] < r) {
      sum += w.v[p];
      ++count;
    }
  }
  if (count == 0) throw std::runtime_error("poincare_trial: empty ball");
  const double mean = sum / static_cast<double>(count);
  const double area = w.spec.h1 * w.spec.h2;
  InequalityReport rep;
  for (std::size_t p = 0; p < w.v.size(); ++p) {
    if (dist.d[p] < r) rep.lhs += std::fabs(w.v[p] - mean);
  }
  rep.lhs *= area;
  const DiscreteField gn = a_gradient_norm(g, w);
  for (std::size_t p = 0; p < gn.v.size(); ++p) {
    if (dist.d[p] < 2.0 * r) rep.rhs += gn.v[p];
  }
  rep.rhs *= r * area;
  fill_constant(rep);
  return rep;
}

InequalityReport vanishing_sobolev_trial(const Geometry& g,
                                         const DiscreteField& w,
                                         const DistanceField& dist, double r,
                                         const std::vector<char>& zero_set) {
  check_same_lattice(w.spec, dist.spec, "vanishing_sobolev_trial");
  if (zero_set.size() != w.v.size()) {
    throw std::invalid_argument("vanishing_sobolev_trial: E size mismatch");
  }
  if (!ball_inside_grid(dist, 2.0 * r)) {
    throw std::invalid_argument("vanishing_sobolev_trial: 2B leaves grid");
  }
  std::size_t ball_nodes = 0;
  std::size_t e_nodes = 0;
  for (std::size_t p = 0; p < w.v.size(); ++p) {
    if (dist.d[p] >= r) continue;
    ++ball_nodes;
    if (zero_set[p]) {
      ++e_nodes;
      if (w.v[p] != 0.0) {
        throw std::invalid_argument(
            "vanishing_sobolev_trial: w does not vanish on E");
      }
    }
  }
  if (2 * e_nodes < ball_nodes) {
    throw std::invalid_argument(
        "vanishing_sobolev_trial: |E| below half the ball");
  }
  const double area = w.spec.h1 * w.spec.h2;
  InequalityReport rep;
  for (std::size_t p = 0; p < w.v.size(); ++p) {
    if (dist.d[p] < r) rep.lhs += std::fabs(w.v[p]);
  }
  rep.lhs *= area;
  const DiscreteField gn = a_gradient_norm(g, w);
  for (std::size_t p = 0; p < gn.v.size(); ++p) {
    if (dist.d[p] < 2.0 * r) rep.rhs += gn.v[p];
  }
  rep.rhs *= r * area;
  fill_constant(rep);
  return rep;
}

InequalityReport caccioppoli_trial(const Geometry& g, const DiscreteField& u,
                                   const DiscreteField& psi,
                                   const DistanceField& dist, double r) {
  check_same_lattice(u.spec, psi.spec, "caccioppoli_trial");
  check_same_lattice(u.spec, dist.spec, "caccioppoli_trial");
  if (!ball_inside_grid(dist, 2.0 * r)) {
    throw std::invalid_argument("caccioppoli_trial: 2B leaves the grid");
  }
  const GridSpec& s = u.spec;
  InequalityReport rep;

  // Interior flux residual: flags fields that do not solve the scheme.
  double umax = 0.0;
  for (const double v : u.v) umax = std::max(umax, std::fabs(v));
  double rel = 0.0;
  for (int i = 1; i + 1 < s.n1; ++i) {
    const double fv = g.f(s.x1(i));
    const double ch = 1.0 / (s.h1 * s.h1);
    const double cv = fv * fv / (s.h2 * s.h2);
    for (int j = 1; j + 1 < s.n2; ++j) {
      const double res =
          ch * (2.0 * u.at(i, j) - u.at(i - 1, j) - u.at(i + 1, j)) +
          cv * (2.0 * u.at(i, j) - u.at(i, j - 1) - u.at(i, j + 1));
      const double den = 2.0 * (ch + cv) * (umax > 0.0 ? umax : 1.0);
      rel = std::max(rel, std::fabs(res) / den);
    }
  }
  if (rel > 1e-7) rep.applicable = false;

  DiscreteField up(s), pu(s);
  for (std::size_t p = 0; p < u.v.size(); ++p) {
    up.v[p] = std::max(u.v[p], 0.0);
    pu.v[p] = psi.v[p] * up.v[p];
  }
  const double area = s.h1 * s.h2;
  const DiscreteField gn_pu = a_gradient_norm(g, pu);
  for (std::size_t p = 0; p < gn_pu.v.size(); ++p) {
    if (dist.d[p] < 2.0 * r) rep.lhs += gn_pu.v[p] * gn_pu.v[p];
  }
  rep.lhs *= area;

  const DiscreteField gn_psi = a_gradient_norm(g, psi);
  double psimax = 0.0;
  double gpsimax = 0.0;
  for (std::size_t p = 0; p < psi.v.size(); ++p) {
    psimax = std::max(psimax, std::fabs(psi.v[p]));
    gpsimax = std::max(gpsimax, gn_psi.v[p]);
  }
  double mass = 0.0;
  for (std::size_t p = 0; p < psi.v.size(); ++p) {
    if (psi.v[p] > 0.0) mass += up.v[p] * up.v[p];
  }
  rep.rhs = (psimax + gpsimax) * (psimax + gpsimax) * mass * area;

  const DiscreteField gn_up = a_gradient_norm(g, up);
  for (std::size_t p = 0; p < u.v.size(); ++p) {
    const double a = psi.v[p] * gn_up.v[p];
    rep.aux_lhs += a * a;
    rep.aux_rhs += gn_psi.v[p] * gn_psi.v[p] * up.v[p] * up.v[p];
  }
  rep.aux_lhs *= area;
  rep.aux_rhs *= area;
  fill_constant(rep);
  return rep;
}

DeGiorgiSets degiorgi_sets(const Geometry& g, const DiscreteField& w,
                           const DistanceField& dist, double r) {
  check_same_lattice(w.spec, dist.spec, "degiorgi_sets");
  if (!ball_inside_grid(dist, 2.0 * r)) {
    throw std::invalid_argument("degiorgi_sets: 2r-ball leaves the grid");
  }
  const GridSpec& s = w.spec;
  std::vector<char> mask_a(w.v.size(), 0), mask_c(w.v.size(), 0),
      mask_d(w.v.size(), 0);
  for (std::size_t p = 0; p < w.v.size(); ++p) {
    if (dist.d[p] < r) {
      if (w.v[p] <= 0.0) mask_a[p] = 1;
      if (w.v[p] >= 1.0) mask_c[p] = 1;
    }
    if (dist.d[p] < 2.0 * r && w.v[p] > 0.0 && w.v[p] < 1.0) mask_d[p] = 1;
  }
  DeGiorgiSets sets;
  sets.r = r;
  sets.area_A = mask_area_cells(s, mask_a);
  sets.area_C = mask_area_cells(s, mask_c);
  sets.area_D = mask_area_cells(s, mask_d);
  sets.area_B = GridOracle::ball_area(dist, r);
  DiscreteField wp(s);
  for (std::size_t p = 0; p < w.v.size(); ++p) {
    wp.v[p] = std::max(w.v[p], 0.0);
  }
  const DiscreteField gn = a_gradient_norm(g, wp);
  double e = 0.0;
  for (std::size_t p = 0; p < gn.v.size(); ++p) {
    if (dist.d[p] < 2.0 * r) e += gn.v[p] * gn.v[p];
  }
  sets.energy = e * s.h1 * s.h2;
  return sets;
}

InequalityReport degiorgi_check(const DeGiorgiSets& sets) {
  InequalityReport rep;
  rep.applicable =
      sets.area_B > 0.0 && 2.0 * sets.area_A >= sets.area_B;
  rep.lhs = sets.energy * sets.area_D;
  const double q = sets.area_A * sets.area_C / (sets.r * sets.area_B);
  rep.rhs = q * q;
  fill_constant(rep);
  // A continuous crossing from {w <= 0} to {w >= 1} has a nonempty band;
  // measuring zero area means the band fell between lattice nodes, so the
  // trial certifies nothing about the floor constant.
  if (sets.area_D == 0.0 && rep.rhs > 0.0) rep.indeterminate = true;
  return rep;
}

std::uint64_t seed_stream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::function<double(double, double)> random_bilinear_function(
    double x1_lo, double x1_hi, double x2_lo, double x2_hi,
    std::uint64_t seed, int coarse) {
  if (coarse < 2) throw std::invalid_argument("coarse lattice too small");
  auto values = std::make_shared<std::vector<double>>(
      static_cast<std::size_t>(coarse) * coarse);
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& v : *values) v = uni(eng);
  const int m = coarse;
  return [=](double x1, double x2) {
    double s = (x1 - x1_lo) / (x1_hi - x1_lo) * (m - 1);
    double t = (x2 - x2_lo) / (x2_hi - x2_lo) * (m - 1);
    s = std::clamp(s, 0.0, static_cast<double>(m - 1));
    t = std::clamp(t, 0.0, static_cast<double>(m - 1));
    const int i = std::min(static_cast<int>(s), m - 2);
    const int j = std::min(static_cast<int>(t), m - 2);
    const double a = s - i;
    const double b = t - j;
    const auto& v = *values;
    return (1 - a) * (1 - b) * v[j * m + i] + a * (1 - b) * v[j * m + i + 1] +
           (1 - a) * b * v[(j + 1) * m + i] + a * b * v[(j + 1) * m + i + 1];
  };
}

DiscreteField random_piecewise_field(const GridSpec& spec,
                                     std::uint64_t seed, int coarse) {
  const double x1_hi = spec.x1(spec.n1 - 1);
  const double x2_hi = spec.x2(spec.n2 - 1);
  return sample_field(
      spec, random_bilinear_function(spec.x0, x1_hi, spec.y0, x2_hi, seed,
                                     coarse));
}

std::string inequality_name(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::Poincare:
      return "poincare";
    case InequalityKind::Sobolev:
      return "sobolev";
    case InequalityKind::Caccioppoli:
      return "caccioppoli";
    case InequalityKind::DeGiorgi:
      return "degiorgi";
  }
  return "unknown";
}

namespace {

// Closed-form calibration shapes in ball-normalized coordinates.
std::function<double(double, double)> shape_fn(int s, int t, Point2 c,
                                               double r, double henv) {
  const double amp = 1.0 + 0.25 * t;
  const double off = 0.1 * (t - 2);
  return [=](double x1, double x2) {
    const double X = (x1 - c.x1) / r;
    const double Y = (x2 - c.x2) / henv;
    double v = 0.0;
    switch (s) {
      case 0: v = X; break;
      case 1: v = Y; break;
      case 2: v = X * Y; break;
      case 3: v = 1.0 - (X * X + Y * Y); break;
      case 4: v = std::fabs(X) - 0.5; break;
      case 5: v = std::sin(0.5 * kPi * (1 + t) * X); break;
      case 6: v = std::sin(0.5 * kPi * (1 + t) * Y); break;
      case 7: v = std::sin(kPi * X) * std::cos(kPi * (1.0 + 0.3 * t) * Y);
        break;
      case 8: v = std::clamp(2.0 * X + 0.2 * t, -1.0, 1.0); break;
      case 9: v = std::fabs(Y) - 0.4; break;
      case 10: v = std::exp(-4.0 * X * X * (1 + t)) - 0.5; break;
      default: v = X * X * X - Y; break;
    }
    return amp * v + off;
  };
}

}  // namespace

McOutcome run_inequality_mc(InequalityKind kind, const Geometry& g,
                            Point2 center, double r, int n1, int n2,
                            const McConfig& cfg) {
  if (n1 < 32 || n2 < 32) {
    throw std::invalid_argument("run_inequality_mc: lattice too coarse");
  }
  const double henv = rstar_and_height(g, center.x1, 2.0 * r).h;
  const double x1_lo = center.x1 - 2.6 * r;
  const double x1_hi = center.x1 + 2.6 * r;
  const double x2_lo = center.x2 - 1.3 * henv;
  const double x2_hi = center.x2 + 1.3 * henv;
  if (!(x1_lo > 0.0) || !(x1_hi < g.R()) || g.F(x1_lo) > 345.0) {
    throw std::invalid_argument("run_inequality_mc: window out of range");
  }

  McOutcome out;
  out.kind = kind;

  // Caccioppoli runs on the solver's cell lattice so that the residual
  // check sees the exact scheme; the other trials use a node lattice.
  GridSpec spec;
  std::unique_ptr<FactoredProblem> fp;
  if (kind == InequalityKind::Caccioppoli) {
    fp = std::make_unique<FactoredProblem>(g, x1_lo, x1_hi, x2_lo, x2_hi,
                                           n1, n2);
    spec = fp->cells();
  } else {
    spec.x0 = x1_lo;
    spec.y0 = x2_lo;
    spec.h1 = (x1_hi - x1_lo) / (n1 - 1);
    spec.h2 = (x2_hi - x2_lo) / (n2 - 1);
    spec.n1 = n1;
    spec.n2 = n2;
  }
  GridOracle oracle(g, spec);
  const DistanceField dist = oracle.distances(center.x1, center.x2);

  DiscreteField psi(spec);
  if (kind == InequalityKind::Caccioppoli) {
    for (std::size_t p = 0; p < psi.v.size(); ++p) {
      psi.v[p] = std::clamp((2.0 * r - dist.d[p]) / r, 0.0, 1.0);
    }
  }
  // Vanishing set: left part of the ball up to x1c; the ramp factor makes
  // trial fields vanish there exactly.
  const double x1c = center.x1 + 0.1 * r;
  std::vector<char> zero_set(static_cast<std::size_t>(spec.n1) * spec.n2, 0);
  for (int j = 0; j < spec.n2; ++j) {
    for (int i = 0; i < spec.n1; ++i) {
      zero_set[spec.index(i, j)] =
          dist.at(i, j) < r && spec.x1(i) <= x1c ? 1 : 0;
    }
  }

  auto apply_ramp = [&](DiscreteField& w) {
    for (int j = 0; j < spec.n2; ++j) {
      for (int i = 0; i < spec.n1; ++i) {
        w.at(i, j) *= std::max(0.0, spec.x1(i) - x1c) / r;
      }
    }
  };
  auto degiorgi_normalize = [&](DiscreteField& w) -> bool {
    std::vector<double> ball_vals;
    for (std::size_t p = 0; p < w.v.size(); ++p) {
      if (dist.d[p] < r) ball_vals.push_back(w.v[p]);
    }
    if (ball_vals.size() < 16) return false;
    const std::size_t q = ball_vals.size() * 6 / 10;
    std::nth_element(ball_vals.begin(), ball_vals.begin() + q,
                     ball_vals.end());
    const double q60 = ball_vals[q];
    const double vmax = *std::max_element(ball_vals.begin(), ball_vals.end());
    if (!(vmax > q60)) return false;
    const double scale = 1.5 / (vmax - q60);
    for (double& v : w.v) v = scale * (v - q60);
    return true;
  };

  auto run_one = [&](std::uint64_t seed,
                     const std::function<double(double, double)>* shape)
      -> InequalityReport {
    switch (kind) {
      case InequalityKind::Poincare: {
        DiscreteField w = shape ? sample_field(spec, *shape)
                                : random_piecewise_field(spec, seed);
        return poincare_trial(g, w, dist, r);
      }
      case InequalityKind::Sobolev: {
        DiscreteField w = shape ? sample_field(spec, *shape)
                                : random_piecewise_field(spec, seed);
        apply_ramp(w);
        return vanishing_sobolev_trial(g, w, dist, r, zero_set);
      }
      case InequalityKind::Caccioppoli: {
        const auto bdata =
            shape ? *shape
                  : random_bilinear_function(x1_lo, x1_hi, x2_lo, x2_hi,
                                             seed);
        const DiscreteField u = fp->solve(bdata);
        return caccioppoli_trial(g, u, psi, dist, r);
      }
      case InequalityKind::DeGiorgi: {
        DiscreteField w = shape ? sample_field(spec, *shape)
                                : random_piecewise_field(spec, seed);
        InequalityReport rep;
        if (!degiorgi_normalize(w)) {
          rep.applicable = false;
          return rep;
        }
        return degiorgi_check(degiorgi_sets(g, w, dist, r));
      }
    }
    throw std::logic_error("run_inequality_mc: unknown kind");
  };

  const bool floor_direction = kind == InequalityKind::DeGiorgi;
  double cal_extreme = floor_direction ? kInf : -kInf;
  double val_extreme = floor_direction ? kInf : -kInf;

  auto record = [&](std::uint64_t seed, bool calibration,
                    const std::function<double(double, double)>* shape) {
    TrialRow row;
    row.seed = seed;
    row.calibration = calibration;
    try {
      const InequalityReport rep = run_one(seed, shape);
      row.applicable = rep.applicable;
      row.indeterminate = rep.indeterminate;
      row.lhs = rep.lhs;
      row.rhs = rep.rhs;
      row.implied = rep.implied_constant;
      if (rep.aux_rhs > 0.0) {
        out.max_aux_ratio =
            std::max(out.max_aux_ratio, rep.aux_lhs / rep.aux_rhs);
      }
      if (rep.applicable && !rep.indeterminate && rep.rhs > 0.0) {
        if (calibration) {
          ++out.calibration_used;
          cal_extreme = floor_direction
                            ? std::min(cal_extreme, rep.implied_constant)
                            : std::max(cal_extreme, rep.implied_constant);
        } else {
          ++out.validation_used;
          val_extreme = floor_direction
                            ? std::min(val_extreme, rep.implied_constant)
                            : std::max(val_extreme, rep.implied_constant);
        }
      }
    } catch (const std::invalid_argument&) {
      row.applicable = false;
    }
    out.rows.push_back(row);
  };

  // Calibration: 12 shapes x 5 variants, then random fields.
  int cal_count = 0;
  for (int s = 0; s < 12 && cal_count < cfg.calibration_trials; ++s) {
    for (int t = 0; t < 5 && cal_count < cfg.calibration_trials; ++t) {
      const auto fn = shape_fn(s, t, center, r, henv);
      record(static_cast<std::uint64_t>(1000 + 5 * s + t), true, &fn);
      ++cal_count;
    }
  }
  for (; cal_count < cfg.calibration_trials; ++cal_count) {
    record(seed_stream(cfg.master_seed, cal_count), true, nullptr);
  }
  if (out.calibration_used == 0) {
    throw std::runtime_error(
        "run_inequality_mc: no applicable calibration trial");
  }
  out.calibrated = cal_extreme;

  // Validation on a fresh seed stream.
  const std::uint64_t val_master = cfg.master_seed ^ 0xD1B54A32D192ED03ULL;
  for (int v = 0; v < cfg.validation_trials; ++v) {
    record(seed_stream(val_master, v), false, nullptr);
  }
  out.validation_extreme = val_extreme;
  for (const TrialRow& row : out.rows) {
    if (row.calibration || !row.applicable || row.indeterminate ||
        row.rhs <= 0.0) {
      continue;
    }
    const bool bad = floor_direction
                         ? row.implied < out.calibrated * (1.0 - cfg.slack)
                         : row.implied > out.calibrated * (1.0 + cfg.slack);
    if (bad) ++out.violations;
  }
  return out;
}

}  // namespace degenlab
