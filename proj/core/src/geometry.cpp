#include "degenlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace degenlab {
namespace {

Jet2 power_log_literal(int k, double sigma, double x) {
  const Jet2 X = Jet2::var(x);
  const Jet2 m = -log(X);
  if (k == 0) return m * pow(X, -sigma);
  Jet2 g = m;  // ln^{(1)}(1/x)
  for (int i = 2; i <= k; ++i) {
    if (g.v <= 0.0)
      throw std::domain_error("PowerLog: iterated log non-positive at x=" +
                              std::to_string(x));
    g = log(g);
  }
  if (g.v <= 0.0)
    throw std::domain_error("PowerLog: iterated log non-positive at x=" +
                            std::to_string(x));
  return m * pow(g, sigma);
}

// -x F'(x) of the literal PowerLog profile, the quantity whose monotonicity
// drives structure condition (4)
double neg_xFp_literal(int k, double sigma, double x) {
  const Jet2 F = power_log_literal(k, sigma, x);
  return -x * F.d1;
}

double golden_min(const std::function<double(double)>& q, double lo,
                  double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double q1 = q(x1), q2 = q(x2);
  for (int i = 0; i < 200 && (b - a) > 1e-13 * std::abs(b); ++i) {
    if (q1 < q2) {
      b = x2;
      x2 = x1;
      q2 = q1;
      x1 = b - gr * (b - a);
      q1 = q(x1);
    } else {
      a = x1;
      x1 = x2;
      q1 = q2;
      x2 = a + gr * (b - a);
      q2 = q(x2);
    }
  }
  return 0.5 * (a + b);
}

// m below which ln^{(k)}(1/x) turns non-positive, in m = ln(1/x) coordinates
double literal_domain_floor_m(int k) {
  double t = 0.0;  // ln^{(k-1)}(m) > 0 <=> m > exp^{(k-2)}(1)
  if (k >= 2) {
    t = 1.0;
    for (int i = 0; i < k - 2; ++i) {
      t = std::exp(t);
      if (t > 700.0)
        throw std::domain_error(
            "PowerLog: depth k exceeds double range for the tail seam");
    }
  }
  return t;
}

}  // namespace

Geometry Geometry::power_log(int k, double sigma, double R) {
  if (k < 0) throw std::invalid_argument("PowerLog: k must be >= 0");
  if (sigma <= 0.0) throw std::invalid_argument("PowerLog: sigma must be > 0");
  if (R <= 0.0 || R >= 1.0)
    throw std::invalid_argument("PowerLog: need 0 < R < 1");
  Geometry g;
  g.kind_ = ProfileKind::PowerLog;
  g.R_ = R;
  g.k_ = k;
  g.sigma_ = sigma;
  g.label_ = "Fks:" + std::to_string(k) + "," + std::to_string(sigma);
  g.evaluator_ = [k, sigma](double x) { return power_log_literal(k, sigma, x); };
  if (k >= 2) {
    double xc;
    if (sigma >= 1.0) {
      // seam where ln^{(k)}(1/x) = 1, i.e. m = exp^{(k-1)}(1)
      double t = 1.0;
      for (int i = 0; i < k - 1; ++i) {
        t = std::exp(t);
        if (t > 700.0)
          throw std::domain_error(
              "PowerLog: depth k exceeds double range for the tail seam");
      }
      xc = std::exp(-t);
    } else {
      // -xF' of the literal formula has a single interior minimum in
      // m = ln(1/x); beyond it condition (4) fails. Seam at half that x.
      const double m_floor = literal_domain_floor_m(k);
      const double m_hi = std::min(m_floor + 60.0, 690.0);
      auto q_of_m = [k, sigma](double m) {
        return neg_xFp_literal(k, sigma, std::exp(-m));
      };
      int best = 0;
      double best_q = 0.0;
      const int n_scan = 800;
      std::vector<double> ms(n_scan);
      for (int i = 0; i < n_scan; ++i) {
        const double u = std::log(1e-6) +
                         (std::log(m_hi - m_floor) - std::log(1e-6)) * i /
                             (n_scan - 1);
        ms[i] = m_floor + std::exp(u);
        const double qi = q_of_m(ms[i]);
        if (i == 0 || qi < best_q) {
          best_q = qi;
          best = i;
        }
      }
      const double m_lo_br = ms[std::max(0, best - 1)];
      const double m_hi_br = ms[std::min(n_scan - 1, best + 1)];
      const double m_turn = golden_min(q_of_m, m_lo_br, m_hi_br);
      xc = 0.5 * std::exp(-m_turn);
    }
    // The tail must keep F >= 0 up to R, i.e. its constant term s must be
    // nonnegative. Near the seam candidate F may still be smaller than
    // -xF' (shallow chains with sigma close to 1), so the seam is lowered
    // until s >= 0; q/F -> 0 as x -> 0, so the walk terminates.
    for (int step = 0;; ++step) {
      const Jet2 Fc = power_log_literal(k, sigma, xc);
      g.tail_p_ = -Fc.d1 * xc * xc;
      g.tail_s_ = Fc.v - g.tail_p_ / xc;
      if (g.tail_p_ > 0.0 && g.tail_s_ >= -1e-12) break;
      if (step >= 200)
        throw std::domain_error(
            "PowerLog: tail splice produced invalid profile");
      xc *= 0.5;
    }
    g.has_tail_ = true;
    g.x_splice_ = xc;
  }
  return g;
}

Geometry Geometry::inverse_power(double sigma, double R) {
  if (sigma <= 0.0)
    throw std::invalid_argument("InversePower: sigma must be > 0");
  Geometry g;
  g.kind_ = ProfileKind::InversePower;
  g.R_ = R;
  g.sigma_ = sigma;
  g.label_ = "Dsigma:" + std::to_string(sigma);
  g.evaluator_ = [sigma](double x) { return pow(Jet2::var(x), -sigma); };
  return g;
}

Geometry Geometry::finite_type(double alpha, double R) {
  if (alpha <= 0.0)
    throw std::invalid_argument("FiniteType: alpha must be > 0");
  if (R >= 1.0) throw std::invalid_argument("FiniteType: need R < 1");
  Geometry g;
  g.kind_ = ProfileKind::FiniteType;
  g.R_ = R;
  g.alpha_ = alpha;
  g.label_ = "finite:" + std::to_string(alpha);
  g.evaluator_ = [alpha](double x) { return log(Jet2::var(x)) * (-alpha); };
  return g;
}

Geometry Geometry::constant(double f0, double R) {
  if (!(f0 > 0.0) || f0 > 1.0)
    throw std::invalid_argument("constant: need 0 < f0 <= 1");
  Geometry g;
  g.kind_ = ProfileKind::Constant;
  g.R_ = R;
  g.f0_ = f0;
  g.label_ = "constant:" + std::to_string(f0);
  const double F0 = -std::log(f0);
  g.evaluator_ = [F0](double) { return Jet2::cst(F0); };
  return g;
}

Geometry Geometry::custom(Evaluator F_evaluator, double R, std::string label) {
  Geometry g;
  g.kind_ = ProfileKind::Custom;
  g.R_ = R;
  g.label_ = std::move(label);
  g.evaluator_ = std::move(F_evaluator);
  return g;
}

ProfileValues Geometry::eval(double x) const {
  if (!(x > 0.0) || !(x < R_))
    throw std::domain_error("Geometry " + label_ + ": x=" + std::to_string(x) +
                            " outside (0, " + std::to_string(R_) + ")");
  Jet2 F;
  if (has_tail_ && x > x_splice_) {
    const double ix = 1.0 / x;
    F = Jet2{tail_p_ * ix + tail_s_, -tail_p_ * ix * ix,
             2.0 * tail_p_ * ix * ix * ix};
  } else {
    F = evaluator_(x);
  }
  return ProfileValues{F.v, F.d1, F.d2, std::exp(-F.v)};
}

double iterated_log(int k, double x) {
  if (k < 0) throw std::invalid_argument("iterated_log: k must be >= 0");
  long double v = x;
  for (int i = 0; i < k; ++i) {
    if (v <= 0.0L)
      throw std::domain_error("iterated_log: non-positive intermediate");
    v = std::log(v);
  }
  return static_cast<double>(v);
}

AuditReport audit_structure_conditions(const Geometry& g, double a, double b,
                                       const StructureAuditConfig& cfg) {
  if (!(a > 0.0) || !(b > a) || !(b <= g.R()))
    throw std::invalid_argument("audit: need 0 < a < b <= R");
  const int n = std::max(16, cfg.sample_count);
  const double tol = cfg.tolerance;

  AuditReport rep;
  std::vector<double> xs(n);
  std::vector<ProfileValues> vals(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    try {
      vals[i] = g.eval(xs[i]);
    } catch (const std::domain_error& e) {
      for (auto& c : rep.conditions) {
        c.pass = false;
        c.witness_x = xs[i];
        c.note = std::string("evaluation failed: ") + e.what();
      }
      rep.overall = false;
      return rep;
    }
  }

  // (1) F -> +inf at 0+: monotone decay along samples plus a growth margin
  {
    ConditionVerdict& c = rep.conditions[0];
    c.pass = true;
    for (int i = 0; i + 1 < n; ++i) {
      const double slack = tol * std::max(1.0, std::abs(vals[i].F));
      if (vals[i + 1].F > vals[i].F + slack) {
        c.pass = false;
        c.witness_x = xs[i + 1];
        c.note = "F increased between samples";
        break;
      }
    }
    if (c.pass) {
      const double Fa = vals[0].F;
      const double Fb = vals[n - 1].F;
      if (!(Fa >= 1e3 || Fa >= 2.0 * std::max(Fb, 1.0))) {
        c.pass = false;
        c.witness_x = xs[0];
        c.note = "F(a) shows no growth toward 0+ (F(a)=" +
                 std::to_string(Fa) + ", F(b)=" + std::to_string(Fb) + ")";
      }
    }
  }

  // (2) F' < 0 and F'' > 0 at every sample
  {
    ConditionVerdict& c = rep.conditions[1];
    c.pass = true;
    for (int i = 0; i < n; ++i) {
      if (!(vals[i].dF < 0.0) || !(vals[i].d2F > 0.0)) {
        c.pass = false;
        c.witness_x = xs[i];
        c.note = "F'=" + std::to_string(vals[i].dF) +
                 ", F''=" + std::to_string(vals[i].d2F);
        break;
      }
    }
  }

  // (3) |F'(x)| within factor C of the center value |F'(r)| across
  // [r/2, 2r] (clamped to the interval); edges suffice since (2) makes
  // |F'| monotone.
  {
    ConditionVerdict& c = rep.conditions[2];
    c.pass = true;
    for (int i = 0; i < n && c.pass; ++i) {
      const double dc = std::abs(vals[i].dF);
      const double cap = cfg.doubling_C * dc * (1.0 + tol);
      const double floor_ = dc / cfg.doubling_C * (1.0 - tol);
      for (const double x :
           {std::max(0.5 * xs[i], a), std::min(2.0 * xs[i], b)}) {
        const double d = std::abs(g.dF(x));
        if (!(d <= cap) || !(d >= floor_)) {
          c.pass = false;
          c.witness_x = xs[i];
          c.note = "|F'(" + std::to_string(x) + ")|/|F'(r)| = " +
                   std::to_string(dc > 0.0 ? d / dc : 0.0) + " outside C band";
          break;
        }
      }
    }
  }

  // (4) psi = 1/(-xF') nondecreasing and -xF' >= epsilon
  {
    ConditionVerdict& c = rep.conditions[3];
    c.pass = true;
    double prev_psi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double q = -xs[i] * vals[i].dF;
      if (!(q >= cfg.epsilon * (1.0 - tol))) {
        c.pass = false;
        c.witness_x = xs[i];
        c.note = "-xF' = " + std::to_string(q) + " below epsilon";
        break;
      }
      const double psi = 1.0 / q;
      if (i > 0 && psi < prev_psi * (1.0 - tol)) {
        c.pass = false;
        c.witness_x = xs[i];
        c.note = "1/(-xF') decreased between samples";
        break;
      }
      prev_psi = psi;
    }
  }

  // (5) xF''/(-F') within the comparability band around 1
  {
    ConditionVerdict& c = rep.conditions[4];
    c.pass = true;
    const double K = cfg.comparability;
    for (int i = 0; i < n; ++i) {
      if (vals[i].dF == 0.0) {
        c.pass = false;
        c.witness_x = xs[i];
        c.note = "F' = 0, ratio undefined";
        break;
      }
      const double rho = xs[i] * vals[i].d2F / (-vals[i].dF);
      if (!(rho >= (1.0 - tol) / K && rho <= K * (1.0 + tol))) {
        c.pass = false;
        c.witness_x = xs[i];
        c.note = "xF''/(-F') = " + std::to_string(rho) + " outside band";
        break;
      }
    }
  }

  rep.overall = rep.conditions[0].pass && rep.conditions[1].pass &&
                rep.conditions[2].pass && rep.conditions[3].pass &&
                rep.conditions[4].pass;
  return rep;
}

}  // namespace degenlab
