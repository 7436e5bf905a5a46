#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace supreg {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive composite Simpson on [a, b].
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-11, int max_depth = 60) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(a, fa, b, fb, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Adaptive Simpson with interior knots: the integrand is integrated
/// piecewise between consecutive knots, so kinks and piecewise
/// polynomial breakpoints do not slow convergence.
template <class F>
double integrate(const F& f, std::vector<double> knots, double tol = 1e-11) {
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += integrate(f, knots[i], knots[i + 1], tol);
    return total;
}

} // namespace supreg
