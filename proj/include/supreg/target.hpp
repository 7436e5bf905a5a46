#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "supreg/quadrature.hpp"

namespace supreg {

/// Regression function together with the Hoelder class (s, L) and sup
/// bound Q it claims to belong to.
struct TargetFunction {
    std::function<double(double)> eval;
    double s = 1.0;
    double L = 1.0;
    double Q = 1.0;
    std::string label;

    double operator()(double x) const { return eval(x); }

    double l2_norm() const {
        return std::sqrt(integrate([this](double x) { const double v = eval(x); return v * v; },
                                   {0.0, 0.2, 0.5, 0.8, 1.0}, 1e-12));
    }
};

/// Triangle bump 0.3 (1 - |x - 0.5| / 0.3)_+ : Lipschitz with constant
/// exactly 1, the reference target for the s = 1 experiments.
inline TargetFunction triangle_target() {
    return TargetFunction{
        [](double x) { return 0.3 * std::max(0.0, 1.0 - std::abs(x - 0.5) / 0.3); },
        1.0, 1.0, 0.3, "triangle"};
}

inline TargetFunction zero_target(double s = 1.0, double L = 1.0) {
    return TargetFunction{[](double) { return 0.0; }, s, L, 0.0, "zero"};
}

/// a sin(2 pi x): |f''| = a (2 pi)^2, usable as an s = 2 target.
inline TargetFunction sine_target(double a = 0.02) {
    const double two_pi = 2.0 * 3.14159265358979323846;
    return TargetFunction{[a, two_pi](double x) { return a * std::sin(two_pi * x); },
                          2.0, a * two_pi * two_pi, a, "sine"};
}

inline TargetFunction target_by_label(const std::string& label) {
    if (label == "triangle") return triangle_target();
    if (label == "zero") return zero_target();
    if (label == "sine") return sine_target();
    throw std::invalid_argument("unknown target function label: " + label);
}

struct HolderReport {
    bool pass = false;
    double worst_ratio = 0.0; // worst |f^(k)(x)-f^(k)(y)| / (L |x-y|^{s-k})
    double worst_x = 0.0;
    double worst_y = 0.0;
};

/// Numerical Hoelder membership check of f over [0,1]: the k-th
/// derivative (k = largest integer < s) is approximated by central
/// finite differences on a uniform grid, and the Hoelder ratio is taken
/// over all pairs of a subsampled point set (at most ~1e6 pairs) plus
/// every adjacent pair, where kink violations show up first.
inline HolderReport holder_check(const std::function<double(double)>& f, double s,
                                 double L, int grid) {
    if (grid < 100) throw std::invalid_argument("holder_check: grid must be >= 100");
    const int k = static_cast<int>(std::ceil(s)) - 1;
    const double step = 1.0 / grid;

    std::vector<double> pos(static_cast<std::size_t>(grid) + 1);
    std::vector<double> val(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        pos[i] = static_cast<double>(i) * step;
        val[i] = f(pos[i]);
    }
    if (k > 0) {
        // central differences, applied k times; trims one point per side each pass
        for (int d = 0; d < k; ++d) {
            std::vector<double> nv(val.size() - 2);
            for (std::size_t i = 1; i + 1 < val.size(); ++i)
                nv[i - 1] = (val[i + 1] - val[i - 1]) / (2.0 * step);
            val = std::move(nv);
            pos.erase(pos.begin());
            pos.pop_back();
        }
    }

    const double expo = s - k;
    const std::size_t npts = pos.size();
    // stride so that the all-pairs set stays near 1e6
    std::size_t stride = 1;
    while ((npts / stride) * (npts / stride) / 2 > 1000000) ++stride;

    HolderReport rep;
    rep.pass = true;
    auto check_pair = [&](std::size_t i, std::size_t j) {
        const double dist = pos[j] - pos[i];
        if (dist <= 0.0) return;
        const double num = std::abs(val[j] - val[i]);
        const double ratio = num / (L * std::pow(dist, expo));
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_x = pos[i];
            rep.worst_y = pos[j];
        }
    };
    for (std::size_t i = 0; i < npts; i += stride)
        for (std::size_t j = i + stride; j < npts; j += stride) check_pair(i, j);
    for (std::size_t i = 0; i + 1 < npts; ++i) check_pair(i, i + 1);

    rep.pass = rep.worst_ratio <= 1.0 + 1e-6;
    return rep;
}

inline HolderReport holder_check(const TargetFunction& f, int grid = 2000) {
    return holder_check(f.eval, f.s, f.L, grid);
}

} // namespace supreg
