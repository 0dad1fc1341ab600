#include "degenlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace degenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);
const double kLn4 = std::log(4.0);

double ln_g_at(const DeltaProfile& p, double m) {
  if (p.lnG_of_m) return p.lnG_of_m(m);
  if (!p.G) {
    throw std::invalid_argument("DeltaProfile: no growth map configured");
  }
  if (m > 700.0) {
    throw std::domain_error(
        "DeltaProfile: r-space growth map cannot reach this scale");
  }
  const double g = p.G(std::exp(-m));
  if (!(g >= 0.0)) {
    throw std::domain_error("DeltaProfile: growth map must be nonnegative");
  }
  return std::log(g);
}

// Least-squares slope of (x_i, y_i).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

double ln_lambda_at_m(const DeltaProfile& p, double C3, double m) {
  const double ld = ln_delta_of_m(p, m);
  const double e2 = -2.0 * ld;
  const double q = e2 > 700.0 ? kInf : C3 * std::exp(e2);
  return -kLn2 * (3.0 + q);
}

}  // namespace

DeltaProfile default_profile(const Geometry& g) {
  DeltaProfile p;
  p.label = g.label();
  p.r_max = std::min(g.R(), 1.0) * (1.0 - 1e-12);
  p.G = [g](double r) {
    if (!(r > 0.0) || !(r < 1.0)) {
      throw std::domain_error("growth map: need r in (0, 1)");
    }
    return g.F(r) / std::log(1.0 / r);
  };
  switch (g.kind()) {
    case ProfileKind::PowerLog: {
      const int k = g.log_depth();
      const double s = g.sigma();
      if (k == 0) {
        p.lnG_of_m = [s](double m) { return s * m; };
      } else {
        // NaN where the chain hits a non-positive intermediate: G is not
        // yet defined at that scale, the row is flagged, not zeroed.
        p.lnG_of_m = [k, s](double m) {
          double v = m;
          for (int i = 0; i < k; ++i) {
            if (!(v > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            v = std::log(v);
          }
          return s * v;
        };
      }
      break;
    }
    case ProfileKind::InversePower: {
      const double s = g.sigma();
      p.lnG_of_m = [s](double m) { return s * m - std::log(m); };
      break;
    }
    case ProfileKind::FiniteType: {
      const double lg = std::log(g.alpha());
      p.lnG_of_m = [lg](double) { return lg; };
      break;
    }
    case ProfileKind::Constant: {
      const double c = -std::log(g.constant_f());
      if (c > 0.0) {
        p.lnG_of_m = [c](double m) { return std::log(c) - std::log(m); };
      } else {
        p.lnG_of_m = [](double) { return -kInf; };
      }
      break;
    }
    case ProfileKind::Custom:
      break;  // r-space only
  }
  return p;
}

double ln_delta_of_m(const DeltaProfile& p, double m) {
  if (!(p.C1 > 0.0) || p.C2 < 0.0 || !(p.N >= 1.0)) {
    throw std::invalid_argument("DeltaProfile: need C1 > 0, C2 >= 0, N >= 1");
  }
  const double v = ln_g_at(p, m - kLn3) / p.N;
  const double ln_a = std::log(p.C1) + p.C2 * std::exp(v);
  return -kLn4 - 2.0 * ln_a;
}

double profile_a(const DeltaProfile& p, double r) {
  if (!(r > 0.0) || !(r <= p.r_max)) {
    throw std::domain_error("profile_a: r outside the profile domain");
  }
  const double v = ln_g_at(p, std::log(1.0 / r)) / p.N;
  return p.C1 * std::exp(p.C2 * std::exp(v));
}

double delta(const DeltaProfile& p, double r) {
  if (!(r > 0.0) || !(3.0 * r <= p.r_max)) {
    throw std::domain_error("delta: 3r outside the profile domain");
  }
  return std::exp(ln_delta_of_m(p, std::log(1.0 / r)));
}

std::vector<LambdaEntry> lambda_sequence(const DeltaProfile& p, double C3,
                                         double r0, long long J) {
  if (!(C3 > 0.0)) throw std::invalid_argument("C3 must be positive");
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (J < 1) throw std::invalid_argument("J must be >= 1");
  if (!(0.75 * r0 <= p.r_max)) {
    throw std::domain_error("lambda_sequence: 3 r_1 outside the domain");
  }
  const double m0 = std::log(1.0 / r0);
  if (m0 + static_cast<double>(J) * kLn4 > 700.0) {
    throw std::domain_error(
        "lambda_sequence: r_J below double range; use the verdict rules");
  }
  std::vector<LambdaEntry> out;
  out.reserve(static_cast<std::size_t>(J));
  for (long long j = 1; j <= J; ++j) {
    LambdaEntry e;
    e.j = j;
    e.m_j = m0 + static_cast<double>(j) * kLn4;
    e.r_j = std::exp(-e.m_j);
    e.ln_delta = ln_delta_of_m(p, e.m_j);
    e.delta = std::exp(e.ln_delta);
    e.ln_lambda = ln_lambda_at_m(p, C3, e.m_j);
    e.lambda = std::exp(e.ln_lambda);
    e.defined = !std::isnan(e.ln_lambda);
    e.underflow = e.defined && e.lambda == 0.0;
    if (e.ln_lambda > -3.0 * kLn2 * (1.0 - 1e-12)) {
      throw std::logic_error("lambda_sequence: lambda above 1/8");
    }
    out.push_back(e);
  }
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Divergent:
      return "divergent";
    case Verdict::Convergent:
      return "convergent";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

VerdictDetail summability_verdict(
    const std::function<double(long long)>& ln_lambda_of_j, long long J,
    double margin) {
  if (J < 8) throw std::invalid_argument("summability_verdict: J too small");
  VerdictDetail det;
  det.J = J;
  std::vector<long long> js;
  for (int s = 0; s < 64; ++s) {
    const double t = static_cast<double>(s) / 63.0;
    const long long j = std::llround(0.5 * J * std::pow(2.0, t));
    if (js.empty() || j > js.back()) js.push_back(std::min(j, J));
  }
  std::vector<double> lx, ly;
  det.tail_min = kInf;
  det.tail_max = -kInf;
  for (const long long j : js) {
    const double lnl = ln_lambda_of_j(j);
    const double L = -lnl / std::log(static_cast<double>(j));
    if (std::isnan(L)) continue;  // scale where the profile is undefined
    det.tail_min = std::min(det.tail_min, L);
    det.tail_max = std::max(det.tail_max, L);
    if (std::isfinite(L)) {
      lx.push_back(std::log(static_cast<double>(j)));
      ly.push_back(L - 1.0);
    }
  }
  if (det.tail_max <= 1.0 - margin) {
    det.verdict = Verdict::Divergent;
  } else if (det.tail_min >= 1.0 + margin) {
    det.verdict = Verdict::Convergent;
  } else if (lx.size() >= 2) {
    det.trend_slope = fit_slope(lx, ly);
    det.verdict =
        det.trend_slope <= 0.0 ? Verdict::Divergent : Verdict::Inconclusive;
  }
  return det;
}

VerdictDetail structural_verdict(const DeltaProfile& p, double C3) {
  if (!p.lnG_of_m) {
    throw std::invalid_argument(
        "structural_verdict: profile lacks the closed form of ln G");
  }
  if (!(C3 > 0.0)) throw std::invalid_argument("C3 must be positive");
  VerdictDetail det;
  det.structural = true;
  const int n = 16;
  const double t_lo = 2.5, t_hi = 6.0;
  const double base16 = std::log(kLn2 * C3 * 16.0 * std::pow(p.C1, 4));
  std::vector<double> lx, ly;
  det.tail_min = kInf;
  det.tail_max = -kInf;
  double y_end = 0.0, t_end = 0.0;
  bool y_end_huge = false;
  for (int i = 0; i < n; ++i) {
    const double t =
        t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n - 1));
    const double m = std::exp(std::exp(t));
    const double v = p.lnG_of_m(m - kLn3) / p.N;
    if (std::isnan(v)) continue;  // profile undefined at this scale
    const double z_ln = std::log(4.0 * p.C2) + v;  // ln(4 C2 G^{1/N})
    // eta = ln y - ln t with y = ln ln(1/lambda); three ranges keep the
    // evaluation inside double range.
    double eta;
    bool huge = false;
    double y = 0.0;
    if (z_ln <= 6.0) {
      const double z = std::exp(z_ln);
      y = std::log(kLn2 *
                   (3.0 + C3 * 16.0 * std::pow(p.C1, 4) * std::exp(z)));
      eta = std::log(y) - std::log(t);
    } else if (z_ln <= 700.0) {
      y = base16 + std::exp(z_ln);
      eta = std::log(y) - std::log(t);
    } else {
      eta = z_ln - std::log(t);
      huge = true;
    }
    det.tail_min = std::min(det.tail_min, eta);
    det.tail_max = std::max(det.tail_max, eta);
    lx.push_back(std::log(t));
    ly.push_back(eta);
    if (i == n - 1) {
      y_end = y;
      t_end = t;
      y_end_huge = huge;
    }
  }
  det.trend_slope = fit_slope(lx, ly);
  // ln L at the window end: ln j tracks ln m = e^t.
  const double lnln_j = std::log(std::exp(t_end) - std::log(kLn4));
  det.tiebreak = y_end_huge ? kInf : y_end - lnln_j;
  if (det.trend_slope < -0.05) {
    det.verdict = Verdict::Divergent;
  } else if (det.trend_slope > 0.05) {
    det.verdict = Verdict::Convergent;
  } else {
    det.verdict =
        det.tiebreak > 0.0 ? Verdict::Convergent : Verdict::Divergent;
  }
  return det;
}

ClassificationReport classify(const Geometry& g, const DeltaProfile& p,
                              double C3, double r0, long long J) {
  ClassificationReport rep;
  rep.geometry = g.label();
  rep.C1 = p.C1;
  rep.C2 = p.C2;
  rep.N = p.N;
  rep.C3 = C3;
  rep.r0 = r0;
  rep.J = J;
  const double m0 = std::log(1.0 / r0);
  const long long cap =
      static_cast<long long>(std::floor((700.0 - m0) / kLn4));
  const long long j_table = std::min<long long>(std::min<long long>(J, cap),
                                                40);
  rep.table = lambda_sequence(p, C3, r0, j_table);
  double s = 0.0;
  for (const LambdaEntry& e : rep.table) {
    if (e.defined) s += e.lambda;
    rep.partial_sums.push_back(s);
  }
  if (p.lnG_of_m) {
    rep.detail = structural_verdict(p, C3);
  } else {
    const long long j_num = std::max<long long>(8, std::min(J, cap));
    rep.detail = summability_verdict(
        [&p, C3, m0](long long j) {
          return ln_lambda_at_m(p, C3, m0 + static_cast<double>(j) * kLn4);
        },
        j_num);
  }
  rep.verdict = rep.detail.verdict;

  // Continuity-hypothesis domination: smallest grid sigma with
  // F <= F_{3,sigma} at deep sample radii.
  try {
    std::vector<double> rs;
    for (int i = 0; i < 24; ++i) {
      const double e =
          -30.0 + 23.0 * static_cast<double>(i) / 23.0;  // 1e-30..1e-7
      rs.push_back(std::pow(10.0, e));
    }
    for (int sg = 1; sg <= 60; ++sg) {
      const double sigma = 0.05 * sg;
      const Geometry ref = Geometry::power_log(3, sigma);
      bool ok = true;
      for (const double r : rs) {
        if (!(g.F(r) <= ref.F(r) * (1.0 + 1e-12) + 1e-12)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        rep.dominating_sigma = sigma;
        break;
      }
    }
  } catch (const std::exception&) {
    rep.dominating_sigma = 0.0;
  }
  return rep;
}

}  // namespace degenlab
