#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "supreg/bandwidth.hpp"
#include "supreg/dataset.hpp"
#include "supreg/kernels.hpp"

namespace supreg {

enum class Zone : int { left = 1, interior = 2, right = 3 };

/// Discretization grid x_j = j Delta_n with the final point forced to 1,
/// per-point data-driven bandwidths, and the three-zone boundary
/// partition [0, tau] / [tau, 1 - tau] / [1 - tau, 1].
struct Grid {
    std::vector<double> points;   // x_0 = 0, ..., x_M = 1
    std::vector<double> H;        // H_n(x_j)
    std::vector<bool> fallback;   // bandwidth infeasible, H forced to 1
    std::vector<Zone> zone;
    double delta = 0.0;           // Delta_n
    double delta_n = 0.0;         // (log n)^{-1}
    double tau = 0.0;             // min(2 c_s T_s H^M, delta_n)
    double HM = 0.0;              // max_j H_n(x_j)
    long n = 0;

    std::size_t M() const { return points.size() - 1; }

    bool any_fallback() const {
        return std::any_of(fallback.begin(), fallback.end(), [](bool b) { return b; });
    }

    /// Cell index j with x in [x_j, x_{j+1}); x = 1 maps to the last cell.
    std::size_t cell(double x) const {
        if (x < 0.0 || x > 1.0) throw std::domain_error("Grid::cell: x outside [0,1]");
        const auto it = std::upper_bound(points.begin(), points.end(), x);
        const auto j = static_cast<std::size_t>(it - points.begin());
        if (j == 0) return 0;
        return std::min(j - 1, M() - 1);
    }
};

inline double grid_spacing(long n, double s) {
    const double log_n = std::log(static_cast<double>(n));
    return std::pow(log_n, -2.0 * s / (2.0 * s + 1.0)) *
           std::pow(static_cast<double>(n), -1.0 / (2.0 * s + 1.0));
}

inline Grid make_grid(const Dataset& d, const KernelFamily& fam) {
    const long n = d.n();
    if (n < 8) throw std::invalid_argument("make_grid: degenerate sample, need n >= 8");
    const double s = fam.s();

    Grid g;
    g.n = n;
    g.delta = grid_spacing(n, s);
    g.delta_n = 1.0 / std::log(static_cast<double>(n));

    const auto m = static_cast<std::size_t>(std::floor(1.0 / g.delta));
    g.points.reserve(m + 2);
    for (std::size_t j = 0; j <= m; ++j) g.points.push_back(static_cast<double>(j) * g.delta);
    if (g.points.back() < 1.0) g.points.push_back(1.0);
    else g.points.back() = 1.0;

    g.H.reserve(g.points.size());
    g.fallback.reserve(g.points.size());
    for (double x : g.points) {
        const auto bw = bandwidth(d, x, s);
        g.H.push_back(bw.value);
        g.fallback.push_back(bw.fallback);
        g.HM = std::max(g.HM, bw.value);
    }

    g.tau = std::min(2.0 * fam.c() * fam.support() * g.HM, g.delta_n);
    g.zone.reserve(g.points.size());
    for (double x : g.points) {
        // ties at tau / 1 - tau go to the boundary zones
        if (x <= g.tau) g.zone.push_back(Zone::left);
        else if (x >= 1.0 - g.tau) g.zone.push_back(Zone::right);
        else g.zone.push_back(Zone::interior);
    }
    return g;
}

} // namespace supreg
