#pragma once

#include <algorithm>
#include <stdexcept>

namespace supreg {

/// Closed interval [lo, hi] with the anchor point the local polynomial
/// monomials are centered at. For intervals produced by interval_at the
/// anchor is the estimation point x itself.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double anchor = 0.0;

    double length() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; }
};

inline Interval make_interval(double lo, double hi) {
    if (hi < lo) throw std::invalid_argument("interval: hi < lo");
    return Interval{lo, hi, lo};
}

/// One-sided estimation window: [x, x+h] in the left half of [0,1]
/// (inclusive at 1/2), [x-h, x] in the right half, clipped to [0,1].
inline Interval interval_at(double x, double h) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("interval_at: x outside [0,1]");
    if (h < 0.0) throw std::invalid_argument("interval_at: negative width");
    Interval I;
    I.anchor = x;
    if (x <= 0.5) {
        I.lo = x;
        I.hi = std::min(1.0, x + h);
    } else {
        I.lo = std::max(0.0, x - h);
        I.hi = x;
    }
    return I;
}

} // namespace supreg
