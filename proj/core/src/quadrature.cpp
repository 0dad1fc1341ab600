#include "degenlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace degenlab {
namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  // index 0..6: +xgk[0..6]; 7: center; 8..14: -xgk[0..6]
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c + h * kXgk[i]);
    fv[8 + i] = f(c - h * kXgk[i]);
  }
  fv[7] = f(c);
  double kronrod = kWgk[7] * fv[7];
  double gauss = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kronrod += kWgk[i] * (fv[i] + fv[8 + i]);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[8 + i]);
  }
  kronrod *= h;
  gauss *= h;
  // plain |K - G| is conservative and scale-invariant
  const double diff = std::abs(kronrod - gauss);
  return Panel{a, b, kronrod, diff};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b, double rel_tol,
                              double abs_tol, int max_panels) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel> heap;
  heap.push(evaluate_panel(f, a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  int n = 1;
  while (n < max_panels) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);  // interval at rounding limit, cannot split further
      break;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  out.value = total;
  out.error_estimate = err;
  out.panels = n;
  out.converged = err <= std::max(abs_tol, rel_tol * std::abs(total)) ||
                  err <= 1e-14 * std::abs(total) + 1e-300;
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  QuadResult q = integrate_adaptive(f, a, b, rel_tol);
  if (!q.converged)
    throw std::runtime_error("quadrature did not converge: error estimate " +
                             std::to_string(q.error_estimate));
  return q.value;
}

double bisect(const std::function<double(double)>& phi, double lo, double hi,
              double rel_xtol, int max_iter) {
  double flo = phi(lo);
  double fhi = phi(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::domain_error("bisect: no sign change on bracket");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_xtol * std::max(std::abs(lo), std::abs(hi))) return mid;
    const double fm = phi(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace degenlab
