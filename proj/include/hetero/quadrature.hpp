#ifndef HETERO_QUADRATURE_HPP
#define HETERO_QUADRATURE_HPP

#include <cmath>
#include <concepts>
#include <limits>

#include "hetero/common.hpp"

namespace hetero {

// Adaptive Simpson quadrature with absolute tolerance and a recursion depth
// cap. Integrands here (s*phi(s) and friends) are smooth on compacts, so the
// classic error estimate |S2-S1|/15 is reliable.
namespace detail {

template <std::invocable<double> F>
double simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw evaluation_error("quadrature: non-finite integrand value");
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Machine-precision floor: once the correction is at rounding level,
    // further refinement only accumulates noise.
    const double eps_floor =
        16.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= eps_floor)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <std::invocable<double> F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 60) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fm = f(0.5 * (a + b));
    const double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
        throw evaluation_error("quadrature: non-finite integrand value");
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// 5-point Gauss-Legendre rule on [a,b]; used to accumulate cumulative
// integral tables cheaply (error ~ h^10 per cell on smooth integrands).
template <std::invocable<double> F>
double gauss5(F&& f, double a, double b) {
    static constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
    static constexpr double w[5] = {0.2369268850561891, 0.4786286704993665,
                                    0.5688888888888889, 0.4786286704993665,
                                    0.2369268850561891};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(c + h * x[i]);
    return h * s;
}

}  // namespace hetero

#endif
