// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace leoroute::quadrature {

/// Adaptive Simpson integration with a relative tolerance.
///
/// The recursion refines an interval until the Richardson error estimate
/// drops below tol scaled to the running magnitude of the whole integral.
/// Throws std::runtime_error if the depth cap is hit before convergence.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol, int max_depth = 32) {
  if (a == b) return 0.0;
  struct Impl {
    const F& f;
    double scale;  // magnitude reference for the relative tolerance
    int max_depth;

    double recurse(double a, double m, double b, double fa, double fm, double fb, double whole,
                   double eps, int depth) {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double h = b - a;
      const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
      const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * eps * scale || depth >= max_depth) {
        // An interval still rough after max_depth halvings signals a
        // genuinely misbehaving integrand, not roundoff.
        if (depth >= max_depth && std::abs(delta) > 1e-3 * scale)
          throw std::runtime_error("adaptive_simpson: depth cap hit without convergence");
        return left + right + delta / 15.0;
      }
      // Halve the budget per side but never chase below roundoff.
      const double eps_next = std::max(0.5 * eps, 4e-16);
      return recurse(a, lm, m, fa, flm, fm, left, eps_next, depth + 1) +
             recurse(m, rm, b, fm, frm, fb, right, eps_next, depth + 1);
    }
  };

  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  Impl impl{f, std::max(std::abs(whole), 1e-300), max_depth};
  // Seed the scale with a coarse composite estimate so that integrands whose
  // initial 3-point Simpson value is accidentally ~0 still get a sane
  // relative reference.
  {
    double coarse = 0.0;
    const int n = 16;
    const double h = (b - a) / n;
    double prev = fa;
    for (int i = 1; i <= n; ++i) {
      const double x = a + i * h;
      const double fx = (i == n) ? fb : f(x);
      coarse += 0.5 * h * (prev + fx);
      prev = fx;
    }
    impl.scale = std::max(impl.scale, std::abs(coarse));
  }
  return impl.recurse(a, m, b, fa, fm, fb, whole, rel_tol, 0);
}

}  // namespace leoroute::quadrature
