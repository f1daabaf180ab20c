#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace curvfam::roots {

struct BracketResult {
  double root;
  double residual;  // f(root)
  int iterations;
};

/// Brent's bracketed root finder (inverse quadratic interpolation / secant
/// with bisection fallback). Requires f(lo), f(hi) of opposite sign or one of
/// them zero; returns std::nullopt otherwise.
///
/// Terminates when the bracket is narrower than
/// 2 * eps * |x| + x_tol / 2, or when |f| <= f_tol.
template <class F>
std::optional<BracketResult> brent(F&& f, double lo, double hi, double x_tol = 0.0,
                                   double f_tol = 0.0, int max_iter = 200) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return BracketResult{a, fa, 0};
  if (fb == 0.0) return BracketResult{b, fb, 0};
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 1; iter <= max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0 || std::abs(fb) <= f_tol) {
      return BracketResult{b, fb, iter};
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        // secant
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        // inverse quadratic interpolation
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return BracketResult{b, fb, max_iter};
}

}  // namespace curvfam::roots
