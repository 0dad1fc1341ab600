#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <degenlab/field.hpp>
#include <degenlab/geometry.hpp>
#include <degenlab/grid_oracle.hpp>
#include <degenlab/inequalities.hpp>
#include <degenlab/metric.hpp>
#include <degenlab/solver.hpp>

#include "test_support.hpp"

using namespace degenlab;
using degenlab::testing::rel_err;

namespace {

double max_error(const DiscreteField& u,
                 const std::function<double(double, double)>& exact) {
  double worst = 0.0;
  for (int j = 0; j < u.spec.n2; ++j) {
    for (int i = 0; i < u.spec.n1; ++i) {
      worst = std::max(
          worst, std::fabs(u.at(i, j) - exact(u.spec.x1(i), u.spec.x2(j))));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("solver: coordinate boundaries are reproduced exactly") {
  // x1 and x2 are in the kernel of the flux scheme for every profile, so
  // the discrete solution matches the boundary polynomial to solver
  // accuracy.
  for (const Geometry& g :
       {Geometry::power_log(3, 0.5), Geometry::inverse_power(0.5),
        Geometry::finite_type(1.0), Geometry::constant(1.0)}) {
    DegenerateProblem p{g,  0.1, 0.4, -0.15, 0.15, 48, 40,
                        [](double a, double) { return a; }};
    const SolveResult sa = solve(p);
    CHECK(max_error(sa.u, [](double a, double) { return a; }) <= 1e-10);
    CHECK(sa.residual <= 1e-10);

    p.boundary = [](double, double b) { return b; };
    const SolveResult sb = solve(p);
    CHECK(max_error(sb.u, [](double, double b) { return b; }) <= 1e-10);
  }
}

TEST_CASE("solver: rectangle validation") {
  const Geometry g = Geometry::finite_type(1.0);
  CHECK_THROWS_AS(cell_lattice(g, 0.4, 0.1, -0.1, 0.1, 8, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(cell_lattice(g, 0.1, 0.4, -0.1, 0.1, 2, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(cell_lattice(g, -0.05, 0.4, -0.1, 0.1, 8, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(cell_lattice(g, 0.1, 0.8, -0.1, 0.1, 8, 8),
                  std::invalid_argument);
  DegenerateProblem p{g, 0.1, 0.4, -0.1, 0.1, 8, 8, nullptr};
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
}

TEST_CASE("solver: vanishing weights are rejected") {
  // x^350 underflows to zero on the whole rectangle; the row weights
  // degenerate and assembly must refuse.
  const Geometry g = Geometry::finite_type(350.0);
  CHECK_THROWS_AS(FactoredProblem(g, 0.05, 0.15, -0.05, 0.05, 8, 8),
                  std::domain_error);
}

TEST_CASE("solver: saddle boundary converges at second order") {
  const Geometry g = Geometry::constant(1.0);
  const auto run_err = [&](int n) {
    DegenerateProblem p{g, 0.1, 0.5, -0.2, 0.2, n, n,
                        [](double a, double b) { return a * a - b * b; }};
    const SolveResult sr = solve(p);
    CHECK(sr.energy > 0.0);
    return max_error(sr.u,
                     [](double a, double b) { return a * a - b * b; });
  };
  const double e32 = run_err(32);
  const double e64 = run_err(64);
  CHECK(e64 <= 2e-5);
  CHECK(e32 / e64 >= 3.4);
  CHECK(e32 / e64 <= 4.4);
}

TEST_CASE("solver: one factorization serves many boundaries") {
  const Geometry g = Geometry::finite_type(1.0);
  const FactoredProblem fp(g, 0.1, 0.4, -0.15, 0.15, 40, 32);
  const DiscreteField ua = fp.solve([](double a, double) { return a; });
  CHECK(max_error(ua, [](double a, double) { return a; }) <= 1e-10);
  CHECK(fp.last_residual() <= 1e-10);
  const DiscreteField ub = fp.solve([](double, double b) { return b; });
  CHECK(max_error(ub, [](double, double b) { return b; }) <= 1e-10);

  // The one-off driver must agree with the factored path.
  DegenerateProblem p{g, 0.1, 0.4, -0.15, 0.15, 40, 32,
                      [](double a, double) { return a; }};
  const SolveResult sr = solve(p);
  for (std::size_t idx = 0; idx < ua.v.size(); ++idx) {
    CHECK(rel_err(sr.u.v[idx], ua.v[idx]) <= 1e-13);
  }
}

TEST_CASE("solver: discrete maximum principle for random boundary data") {
  const Geometry g = Geometry::power_log(3, 0.5);
  const auto bdry = random_bilinear_function(0.1, 0.4, -0.15, 0.15, 321);
  DegenerateProblem p{g, 0.1, 0.4, -0.15, 0.15, 48, 40, bdry};
  const SolveResult sr = solve(p);
  // Ghost values sample the boundary at face centres: left and right
  // walls at cell rows, bottom and top walls at cell columns.
  double lo = 1e300, hi = -1e300;
  const GridSpec& s = sr.u.spec;
  for (int j = 0; j < s.n2; ++j) {
    for (const double a : {0.1, 0.4}) {
      lo = std::min(lo, bdry(a, s.x2(j)));
      hi = std::max(hi, bdry(a, s.x2(j)));
    }
  }
  for (int i = 0; i < s.n1; ++i) {
    for (const double b : {-0.15, 0.15}) {
      lo = std::min(lo, bdry(s.x1(i), b));
      hi = std::max(hi, bdry(s.x1(i), b));
    }
  }
  const double pad = 1e-12 * (hi - lo);
  for (const double v : sr.u.v) {
    CHECK(v >= lo - pad);
    CHECK(v <= hi + pad);
  }
}

TEST_CASE("solver: truncation cascade") {
  GridSpec spec;
  spec.x0 = 0.1;
  spec.y0 = -0.1;
  spec.n1 = 16;
  spec.n2 = 16;
  spec.h1 = 0.2 / 15.0;
  spec.h2 = 0.2 / 15.0;

  const DiscreteField ones =
      sample_field(spec, [](double, double) { return 1.0; });
  const auto fixed = truncation_cascade(ones, 5);
  REQUIRE(fixed.size() == 6);
  for (const DiscreteField& w : fixed) {
    for (const double v : w.v) CHECK(v == 1.0);
  }

  const DiscreteField half =
      sample_field(spec, [](double, double) { return 0.5; });
  const auto down = truncation_cascade(half, 3);
  for (const double v : down[3].v) CHECK(v == -3.0);

  // Random field bounded by 1: the doubling recursion holds to 1e-12 for
  // twenty levels and level zero is the input, bitwise.
  const DiscreteField w0 = random_piecewise_field(spec, 97);
  const auto chain = truncation_cascade(w0, 20);
  REQUIRE(chain.size() == 21);
  for (std::size_t idx = 0; idx < w0.v.size(); ++idx) {
    CHECK(std::fabs(chain[0].v[idx] - w0.v[idx]) <= 1e-15);
  }
  for (int k = 0; k + 1 <= 20; ++k) {
    for (std::size_t idx = 0; idx < w0.v.size(); ++idx) {
      CHECK(std::fabs(chain[k + 1].v[idx] -
                      (2.0 * chain[k].v[idx] - 1.0)) <= 1e-12);
    }
  }

  DiscreteField above(spec);
  for (double& v : above.v) v = 1.0 + 1e-6;
  CHECK_THROWS_AS(truncation_cascade(above, 3), std::domain_error);
  CHECK_THROWS_AS(truncation_cascade(ones, -1), std::invalid_argument);
}

TEST_CASE("solver: oscillation over numeric balls") {
  const Geometry g = Geometry::constant(1.0);
  GridSpec spec;
  spec.x0 = 0.1;
  spec.y0 = -0.1;
  spec.n1 = 65;
  spec.n2 = 65;
  spec.h1 = 0.2 / 64.0;
  spec.h2 = 0.2 / 64.0;
  const GridOracle oracle(g, spec);
  const DistanceField dist = oracle.distances(0.2, 0.0);

  const DiscreteField flat =
      sample_field(spec, [](double, double) { return 3.0; });
  CHECK(oscillation(flat, dist, 0.05) == 0.0);

  const DiscreteField lin =
      sample_field(spec, [](double, double b) { return b; });
  const double osc = oscillation(lin, dist, 0.05);
  CHECK(osc >= 0.09);
  CHECK(osc <= 0.1001);
  CHECK(oscillation(lin, dist, 0.025) <= osc);

  CHECK_THROWS_AS(oscillation(lin, dist, 1e-4), std::runtime_error);
  GridSpec other = spec;
  other.n1 = 33;
  const DiscreteField wrong =
      sample_field(other, [](double, double) { return 0.0; });
  CHECK_THROWS_AS(oscillation(wrong, dist, 0.05), std::invalid_argument);
}

TEST_CASE("solver: oscillation matches twice the ball height for the "
          "vertical coordinate") {
  const Geometry g = Geometry::power_log(3, 0.5);
  const double x1 = 0.2, r = 0.0078125;
  const HeightProfile hp = rstar_and_height(g, x1, r);
  const double henv = rstar_and_height(g, x1, 2.0 * r).h;
  const GridSpec spec = testing::ball_window(g, x1, henv, r, 225, 161);
  const GridOracle oracle(g, spec);
  const DistanceField dist = oracle.distances(x1, 0.0);
  const DiscreteField u =
      sample_field(spec, [](double, double b) { return b; });
  const double osc = oscillation(u, dist, r);
  CHECK(rel_err(osc, 0.00017033692083807611) <= 1e-10);
  const double q = osc / (2.0 * hp.h);
  CHECK(q >= 0.9);
  CHECK(q <= 1.0);
}

TEST_CASE("solver: oscillation decay run") {
  const Geometry g = Geometry::power_log(3, 0.5);
  DegenerateProblem p{g,   0.14, 0.26, -0.0015, 0.0015, 160, 120,
                      [](double, double b) { return b; }};
  const double r0 = 0.0195;
  const OscillationReport rep =
      oscillation_decay_run(p, {0.2, 0.0}, r0, 3);
  REQUIRE(rep.levels.size() == 3);
  CHECK(std::isnan(rep.levels[0].ratio));
  for (std::size_t l = 0; l < rep.levels.size(); ++l) {
    const OscillationLevel& lev = rep.levels[l];
    CHECK(lev.nodes >= 16);
    CHECK(rel_err(lev.r, r0 * std::pow(0.5, l)) <= 1e-15);
    CHECK(std::isnan(lev.predicted_cap));
    if (l > 0) {
      CHECK(lev.osc <= rep.levels[l - 1].osc * (1.0 + 1e-12));
      CHECK(lev.ratio < 1.0);
      CHECK(rel_err(lev.ratio, lev.osc / rep.levels[l - 1].osc) <= 1e-12);
    }
  }

  const OscillationReport capped = oscillation_decay_run(
      p, {0.2, 0.0}, r0, 2, [](double) { return 0.5; });
  CHECK(capped.levels[1].predicted_cap == doctest::Approx(0.75));

  CHECK_THROWS_AS(oscillation_decay_run(p, {0.2, 0.0}, 0.05, 2),
                  std::invalid_argument);
}
