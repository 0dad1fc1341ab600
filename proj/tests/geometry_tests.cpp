#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <degenlab/geometry.hpp>

#include "test_support.hpp"

using namespace degenlab;
using degenlab::testing::rel_err;

TEST_CASE("geometry: inverse power jets match hand values") {
  const Geometry g1 = Geometry::inverse_power(1.0);
  const ProfileValues a = g1.eval(0.5);
  CHECK(rel_err(a.F, 2.0) <= 1e-15);
  CHECK(rel_err(a.dF, -4.0) <= 1e-15);
  CHECK(rel_err(a.d2F, 16.0) <= 1e-15);
  CHECK(rel_err(a.f, std::exp(-2.0)) <= 1e-15);

  const Geometry gh = Geometry::inverse_power(0.5);
  const ProfileValues b = gh.eval(0.25);
  CHECK(rel_err(b.F, 2.0) <= 1e-14);
  CHECK(rel_err(b.dF, -4.0) <= 1e-14);
  CHECK(rel_err(b.d2F, 24.0) <= 1e-14);
}

TEST_CASE("geometry: finite type is a pure power of x") {
  const Geometry g = Geometry::finite_type(2.0);
  const ProfileValues v = g.eval(0.2);
  CHECK(rel_err(v.F, 2.0 * std::log(5.0)) <= 1e-15);
  CHECK(rel_err(v.dF, -10.0) <= 1e-14);
  CHECK(rel_err(v.d2F, 50.0) <= 1e-14);
  CHECK(rel_err(v.f, 0.04) <= 1e-14);
}

TEST_CASE("geometry: power log literal values") {
  // k = 0: F = ln(1/x) x^-sigma, differentiated by hand.
  const Geometry g0 = Geometry::power_log(0, 0.5);
  const double x = 0.25, m = std::log(4.0);
  const ProfileValues v = g0.eval(x);
  CHECK(rel_err(v.F, m * 2.0) <= 1e-14);
  CHECK(rel_err(v.dF, -std::pow(x, -1.5) * (1.0 + 0.5 * m)) <= 1e-14);
  CHECK(rel_err(v.d2F, std::pow(x, -2.5) * (1.5 * (1.0 + 0.5 * m) + 0.5)) <=
        1e-14);

  // k = 1 at x = e^-e: the inner log is e, so F = e * e^2.
  const Geometry g1 = Geometry::power_log(1, 2.0);
  CHECK(rel_err(g1.F(std::exp(-std::exp(1.0))), std::exp(3.0)) <= 1e-13);

  // k = 3 at x = e^-e^e: the chain collapses to 1, so F = e^e for any sigma.
  const double deep = std::exp(-std::exp(std::exp(1.0)));
  for (const double sigma : {0.5, 0.9}) {
    const Geometry g3 = Geometry::power_log(3, sigma);
    REQUIRE(deep < g3.splice_point());
    CHECK(rel_err(g3.F(deep), std::exp(std::exp(1.0))) <= 1e-13);
  }
}

TEST_CASE("geometry: tail seams sit at unit iterated log when sigma >= 1") {
  CHECK(rel_err(Geometry::power_log(2, 1.5).splice_point(),
                std::exp(-std::exp(1.0))) <= 1e-12);
  CHECK(rel_err(Geometry::power_log(3, 1.5).splice_point(),
                std::exp(-std::exp(std::exp(1.0)))) <= 1e-12);
}

TEST_CASE("geometry: tail seam regression values") {
  CHECK(rel_err(Geometry::power_log(2, 0.5).splice_point(),
                0.0961478204303058) <= 1e-13);
  CHECK(rel_err(Geometry::power_log(2, 0.9).splice_point(),
                0.082788569261073058) <= 1e-13);
  CHECK(rel_err(Geometry::power_log(3, 0.5).splice_point(),
                0.00099009334420774981) <= 1e-13);
  CHECK(rel_err(Geometry::power_log(3, 0.9).splice_point(),
                0.010936715599193099) <= 1e-13);
  CHECK_FALSE(Geometry::power_log(0, 0.5).has_tail());
  CHECK_FALSE(Geometry::power_log(1, 1.5).has_tail());
}

TEST_CASE("geometry: derivative jets agree with finite differences") {
  const std::vector<Geometry> fams = {
      Geometry::inverse_power(0.5), Geometry::inverse_power(1.0),
      Geometry::finite_type(1.0),   Geometry::finite_type(2.5),
      Geometry::power_log(0, 1.5),  Geometry::power_log(1, 0.9),
      Geometry::power_log(2, 0.5),  Geometry::power_log(3, 0.5)};
  for (const Geometry& g : fams) {
    for (const double x : {0.03, 0.1, 0.3, 0.6}) {
      if (x >= g.R()) continue;
      // The tail is only C^1; keep the stencil away from the seam.
      if (g.has_tail() && x > 0.4 * g.splice_point() &&
          x < 2.5 * g.splice_point()) {
        continue;
      }
      const double h1 = x * 1e-6;
      const double fd1 = (g.F(x + h1) - g.F(x - h1)) / (2.0 * h1);
      CHECK(rel_err(fd1, g.dF(x)) <= 1e-4);
      const double h2 = x * 1e-4;
      const double fd2 =
          (g.F(x + h2) - 2.0 * g.F(x) + g.F(x - h2)) / (h2 * h2);
      CHECK(rel_err(fd2, g.d2F(x)) <= 1e-3);
    }
  }
}

TEST_CASE("geometry: tail joins C1 and keeps the structure identities") {
  for (const int k : {2, 3}) {
    for (const double sigma : {0.5, 0.9, 1.5}) {
      const Geometry g = Geometry::power_log(k, sigma);
      REQUIRE(g.has_tail());
      const double xc = g.splice_point();
      const double lo = xc * (1.0 - 1e-8), hi = xc * (1.0 + 1e-8);
      CHECK(rel_err(g.F(lo), g.F(hi)) <= 1e-6);
      CHECK(rel_err(g.dF(lo), g.dF(hi)) <= 1e-5);
      // Inside the tail: x F'' / (-F') = 2 exactly and 1/(-xF') increases.
      const double x2 = 2.0 * xc, x3 = 3.0 * xc;
      if (x3 < g.R()) {
        CHECK(rel_err(x2 * g.d2F(x2) / (-g.dF(x2)), 2.0) <= 1e-12);
        const double psi2 = 1.0 / (-x2 * g.dF(x2));
        const double psi3 = 1.0 / (-x3 * g.dF(x3));
        CHECK(psi3 > psi2);
      }
    }
  }
}

TEST_CASE("geometry: family ordering at depth") {
  // Deeper log chains flatten the profile: F_{3,s} <= F_{2,s} <= F_{1,s}
  // <= F_{0,s}, with the inverse power D_s between F_3 and F_0.
  const double sigma = 0.5;
  const Geometry g3 = Geometry::power_log(3, sigma);
  const Geometry g2 = Geometry::power_log(2, sigma);
  const Geometry g1 = Geometry::power_log(1, sigma);
  const Geometry g0 = Geometry::power_log(0, sigma);
  const Geometry gd = Geometry::inverse_power(sigma);
  for (const double r : {1e-5, 1e-6, 1e-7}) {
    REQUIRE(r < g3.splice_point());
    CHECK(g3.F(r) <= g2.F(r));
    CHECK(g2.F(r) <= g1.F(r));
    CHECK(g1.F(r) <= g0.F(r));
    CHECK(g3.F(r) <= gd.F(r));
    CHECK(gd.F(r) <= g0.F(r));
  }
}

TEST_CASE("geometry: iterated log values and guards") {
  CHECK(iterated_log(0, 7.0) == 7.0);
  CHECK(rel_err(iterated_log(1, std::exp(1.0)), 1.0) <= 1e-15);
  CHECK(rel_err(iterated_log(2, std::exp(std::exp(1.0))), 1.0) <= 1e-14);
  CHECK(rel_err(iterated_log(3, 1e6), 0.96538253225195858) <= 1e-15);
  CHECK(rel_err(iterated_log(3, 1e10), 1.1431450021844147) <= 1e-15);
  CHECK_THROWS_AS(iterated_log(2, 1.0), std::domain_error);
  CHECK_THROWS_AS(iterated_log(3, 2.0), std::domain_error);
  CHECK_THROWS_AS(iterated_log(-1, 2.0), std::invalid_argument);
}

TEST_CASE("geometry: structure audit verdicts for the built-ins") {
  for (const Geometry& g :
       {Geometry::inverse_power(0.5), Geometry::power_log(3, 0.5),
        Geometry::finite_type(1.0)}) {
    const AuditReport rep = audit_structure_conditions(g, 1e-6, 0.4);
    for (const ConditionVerdict& c : rep.conditions) CHECK(c.pass);
    CHECK(rep.overall);
  }

  // A constant profile has no blow-up at 0+, so condition (1) fails.
  const AuditReport flat =
      audit_structure_conditions(Geometry::constant(0.5), 1e-6, 0.4);
  CHECK_FALSE(flat.conditions[0].pass);
  CHECK_FALSE(flat.overall);

  // Condition (4) carries a slope floor; a nearly flat finite type sits
  // below it.
  const AuditReport thin =
      audit_structure_conditions(Geometry::finite_type(5e-5), 1e-6, 0.4);
  CHECK_FALSE(thin.conditions[3].pass);
  CHECK_FALSE(thin.overall);
}

TEST_CASE("geometry: structure audit rejects bad intervals") {
  const Geometry g = Geometry::inverse_power(1.0);
  CHECK_THROWS_AS(audit_structure_conditions(g, 0.4, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(audit_structure_conditions(g, 0.5 * g.R(), 2.0 * g.R()),
                  std::invalid_argument);
}

TEST_CASE("geometry: constructor guards") {
  CHECK_THROWS_AS(Geometry::power_log(-1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::power_log(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::power_log(0, 0.5, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::inverse_power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::finite_type(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::finite_type(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Geometry::constant(1.5), std::invalid_argument);
}

TEST_CASE("geometry: custom evaluator mirrors a built-in") {
  const Geometry mirror = Geometry::custom(
      [](double x) { return 1.0 / Jet2::var(x); }, 0.5, "mirror");
  const Geometry ref = Geometry::inverse_power(1.0, 0.5);
  CHECK(mirror.kind() == ProfileKind::Custom);
  CHECK(mirror.label() == "mirror");
  for (const double x : {0.05, 0.2, 0.45}) {
    CHECK(rel_err(mirror.F(x), ref.F(x)) <= 1e-15);
    CHECK(rel_err(mirror.dF(x), ref.dF(x)) <= 1e-15);
    CHECK(rel_err(mirror.d2F(x), ref.d2F(x)) <= 1e-15);
  }
}

TEST_CASE("geometry: evaluation outside the open domain throws") {
  const Geometry g = Geometry::finite_type(1.0);
  CHECK_THROWS_AS(g.eval(0.0), std::domain_error);
  CHECK_THROWS_AS(g.eval(-0.1), std::domain_error);
  CHECK_THROWS_AS(g.eval(g.R() * 1.000001), std::domain_error);
  CHECK_NOTHROW(g.eval(g.R() * 0.999999));
}
