#pragma once

#include <functional>
#include <string>

#include "degenlab/jet.hpp"

namespace degenlab {

enum class ProfileKind { FiniteType, PowerLog, InversePower, Constant, Custom };

struct ProfileValues {
  double F;
  double dF;
  double d2F;
  double f;  // exp(-F)
};

// Degeneracy profile F = -ln f on the open interval (0, R).
//
// Built-in families:
//   PowerLog(k, sigma):   F(x) = ln(1/x) * (ln^{(k)}(1/x))^sigma,
//                         with ln^{(0)}(1/x) = 1/x
//   InversePower(sigma):  F(x) = (1/x)^sigma
//   FiniteType(alpha):    F(x) = alpha * ln(1/x), i.e. f(x) = x^alpha
//
// PowerLog with k >= 2 has a shrinking classical domain (iterated logs turn
// negative at desk scale), so it is continued by a C^1 inverse-power tail
// F(x) = p/x + s spliced at x_c. The tail keeps all five structure
// conditions: 1/(-xF') = x/p is increasing and xF''/(-F') = 2 exactly.
// For sigma < 1 the seam sits at half the offset where 1/(-xF') of the
// literal formula starts decreasing; for sigma >= 1 at ln^{(k)}(1/x) = 1.
class Geometry {
 public:
  using Evaluator = std::function<Jet2(double)>;

  static constexpr double kDefaultR = 0.75;

  static Geometry power_log(int k, double sigma, double R = kDefaultR);
  static Geometry inverse_power(double sigma, double R = kDefaultR);
  static Geometry finite_type(double alpha, double R = kDefaultR);
  static Geometry constant(double f0 = 1.0, double R = kDefaultR);
  static Geometry custom(Evaluator F_evaluator, double R, std::string label);

  ProfileValues eval(double x) const;
  double F(double x) const { return eval(x).F; }
  double dF(double x) const { return eval(x).dF; }
  double d2F(double x) const { return eval(x).d2F; }
  double f(double x) const { return eval(x).f; }

  ProfileKind kind() const { return kind_; }
  double R() const { return R_; }
  const std::string& label() const { return label_; }

  // family parameters; meaningful only for the matching kind
  int log_depth() const { return k_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  double constant_f() const { return f0_; }

  bool has_tail() const { return has_tail_; }
  double splice_point() const { return has_tail_ ? x_splice_ : R_; }

 private:
  Geometry() = default;

  ProfileKind kind_ = ProfileKind::Custom;
  double R_ = kDefaultR;
  std::string label_;
  Evaluator evaluator_;
  int k_ = 0;
  double sigma_ = 0.0;
  double alpha_ = 0.0;
  double f0_ = 1.0;
  bool has_tail_ = false;
  double x_splice_ = 0.0;
  double tail_p_ = 0.0;  // tail profile p/x + s
  double tail_s_ = 0.0;
};

// ln applied k times; k = 0 is the identity. Intermediate values are kept in
// extended precision; throws std::domain_error when any intermediate <= 0.
double iterated_log(int k, double x);

struct StructureAuditConfig {
  int sample_count = 256;
  double epsilon = 1e-4;       // lower bound required of -x F'(x)
  double doubling_C = 8.0;     // |F'(x)| vs |F'(r)| band over [r/2, 2r]
  double comparability = 8.0;  // band for x F''/(-F') around 1
  double tolerance = 1e-9;     // relative slack on all comparisons
};

struct ConditionVerdict {
  bool pass = false;
  double witness_x = 0.0;  // worst or first offending sample
  std::string note;
};

struct AuditReport {
  // [0] F -> +inf at 0+      [1] F' < 0 and F'' > 0
  // [2] |F'| doubling        [3] 1/(-xF') nondecreasing and -xF' >= eps
  // [4] xF''/(-F') comparable to 1
  ConditionVerdict conditions[5];
  bool overall = false;
};

// Samples (a, b) geometrically and checks the five structure conditions.
// The limit condition [0] is certified by monotone growth along the samples
// together with F(a) >= 1000 or F(a) >= 2 * max(F(b), 1).
AuditReport audit_structure_conditions(const Geometry& g, double a, double b,
                                       const StructureAuditConfig& cfg = {});

}  // namespace degenlab
