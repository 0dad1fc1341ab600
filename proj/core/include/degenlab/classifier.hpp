#pragma once

#include <functional>
#include <string>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degenlab {

// Growth profile behind the continuity criterion:
//   A_N(r) = C1 exp(C2 G(r)^{1/N}),  delta(r) = (2 A_N(3r))^{-2}.
struct DeltaProfile {
  double C1 = 1.0;
  double C2 = 1.0;
  double N = 1.0;
  std::function<double(double)> G;         // growth map in r
  // ln G at m = ln(1/r); closed form for the built-in families, empty for
  // custom geometries (then G is evaluated in r-space, which caps m).
  std::function<double(double)> lnG_of_m;
  double r_max = 0.0;  // largest admissible argument 3r
  std::string label;
};

// Default profile: G(r) = F(r)/ln(1/r) with C1 = C2 = N = 1; the literal
// family formulas supply lnG_of_m.
DeltaProfile default_profile(const Geometry& g);

double profile_a(const DeltaProfile& p, double r);  // A_N(r)
double delta(const DeltaProfile& p, double r);      // (2 A_N(3r))^{-2}
// ln delta at m = ln(1/r); safe far below double range of r.
double ln_delta_of_m(const DeltaProfile& p, double m);

struct LambdaEntry {
  long long j = 0;
  double r_j = 0.0;       // exp(-m_j); 0 when below double range
  double m_j = 0.0;       // ln(1/r_j), exact
  double ln_delta = 0.0;
  double delta = 0.0;     // exp(ln_delta); may underflow to 0
  double ln_lambda = 0.0; // exact log-space value
  double lambda = 0.0;    // exp(ln_lambda); 0 on underflow, flagged
  bool underflow = false;
  // Deep-log profiles leave G undefined at coarse scales (an iterated log
  // of the chain is not yet positive); such rows carry NaN and are
  // excluded from sums and verdicts.
  bool defined = true;
};

// lambda_j = 2^{-(3 + C3/delta(r_j)^2)} on the scale r_j = r0/4^j for
// j = 1..J. Materialized list; requires r_J above the double range.
std::vector<LambdaEntry> lambda_sequence(const DeltaProfile& p, double C3,
                                         double r0, long long J);

enum class Verdict { Divergent, Convergent, Inconclusive };
std::string verdict_name(Verdict v);

struct VerdictDetail {
  Verdict verdict = Verdict::Inconclusive;
  bool structural = false;
  // Raw-sequence rule: bounds of the diagnostic exponent
  // L_j = ln(1/lambda_j)/ln j over the sampled tail, and the trend of
  // (L_j - 1) against ln j. Structural rule: bounds and slope of the
  // growth statistic ln y against ln t (y = ln ln(1/lambda), t = ln ln m).
  double tail_min = 0.0;
  double tail_max = 0.0;
  double trend_slope = 0.0;
  double tiebreak = 0.0;  // structural: ln L at the far end of the window
  long long J = 0;
};

// Divergent when the tail exponents stay below 1 - margin, convergent when
// they stay above 1 + margin; otherwise the trend of (L_j - 1) breaks the
// tie (nonpositive -> divergent, increasing -> inconclusive).
VerdictDetail summability_verdict(
    const std::function<double(long long)>& ln_lambda_of_j,
    long long J = 1000000, double margin = 0.05);

// Far-asymptotic form of the same comparison for profiles with a closed
// form of ln G: needs no representable r_j, so it sees tails the raw rule
// cannot reach (the slope separates sub- and super-logarithmic ln(1/(
// lambda_j)) growth; ties go to the sign of ln L at the window end).
VerdictDetail structural_verdict(const DeltaProfile& p, double C3);

struct ClassificationReport {
  std::string geometry;
  double C1 = 1.0, C2 = 1.0, N = 1.0, C3 = 1.0;
  double r0 = 0.0;
  long long J = 0;
  std::vector<LambdaEntry> table;    // display prefix of the sequence
  std::vector<double> partial_sums;  // running sums over the table
  VerdictDetail detail;
  Verdict verdict = Verdict::Inconclusive;
  // Smallest sigma on a 0.05 grid with F <= F_{3,sigma} at deep sample
  // radii; 0 when no grid value dominates.
  double dominating_sigma = 0.0;
};

// Full criterion run: display table, verdict (structural when the closed
// form is available, raw-sequence otherwise with J capped to representable
// radii), and the domination check of the continuity hypothesis.
ClassificationReport classify(const Geometry& g, const DeltaProfile& p,
                              double C3, double r0, long long J = 1000000);

}  // namespace degenlab
