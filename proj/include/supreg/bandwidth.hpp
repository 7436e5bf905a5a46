#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "supreg/dataset.hpp"
#include "supreg/density.hpp"

namespace supreg {

struct BandwidthResult {
    double value = 1.0;
    bool fallback = false; // no h in [0,1] satisfied the balance inequality
};

/// Data-driven bandwidth at x: the smallest h in [0,1] with
///
///     h^s >= sqrt( log n / (n bar mu_n(I(x, h))) ).
///
/// Both sides are monotone in h, so the feasible set is an interval
/// [H, 1] and its left end is found exactly by scanning candidate
/// in-window counts m: with d_m the m-th smallest one-sided distance
/// from x (right side when x <= 1/2, left side otherwise), the first m
/// whose candidate h = max(d_m, (log n / m)^{1/(2s)}) keeps the window
/// count at m attains the infimum.
inline BandwidthResult bandwidth(const Dataset& d, double x, double s) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("bandwidth: x outside [0,1]");
    const long n = d.n();
    const double log_n = std::log(static_cast<double>(n));
    const auto& xs = d.sorted_x();

    // one-sided distances in increasing order, without materializing them
    const bool right = x <= 0.5;
    std::size_t start;
    std::size_t count;
    if (right) {
        start = static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
        count = xs.size() - start;
    } else {
        start = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        count = start;
    }
    const auto dist = [&](std::size_t m) { // m-th smallest, 1-based
        return right ? xs[start + m - 1] - x : x - xs[start - m];
    };

    for (std::size_t m = 1; m <= count; ++m) {
        const double thresh =
            log_n > 0.0 ? std::pow(log_n / static_cast<double>(m), 1.0 / (2.0 * s)) : 0.0;
        const double h = std::max(dist(m), thresh);
        const double next = (m < count) ? dist(m + 1) : std::numeric_limits<double>::infinity();
        if (h < next) {
            if (h <= 1.0) return {h, false};
            return {1.0, true}; // all later candidates are >= h
        }
    }
    return {1.0, true};
}

/// The deterministic rate and bandwidth quantities evaluated at x.
struct DeterministicBandwidths {
    double h_n = 0.0;  // (sigma/L)^{2/(2s+1)} (log n / n)^{1/(2s+1)}
    double t_n = 0.0;  // (sigma/L)^{2/(2s+1)} n^{-1/(2s+1)}
    double h_mu = 0.0; // (log n / (n mu(x)))^{1/(2s+1)}
    double r_mu = 0.0; // (log n / (n mu(x)))^{s/(2s+1)}
};

inline DeterministicBandwidths deterministic_bandwidths(long n, double s, double sigma,
                                                        double L, const DesignDensity& mu,
                                                        double x) {
    const double m = mu(x);
    if (!(m > 0.0)) throw std::invalid_argument("deterministic_bandwidths: mu(x) must be > 0");
    const double log_n = std::log(static_cast<double>(n));
    const double scale = std::pow(sigma / L, 2.0 / (2.0 * s + 1.0));
    DeterministicBandwidths out;
    out.h_n = scale * std::pow(log_n / n, 1.0 / (2.0 * s + 1.0));
    out.t_n = scale * std::pow(static_cast<double>(n), -1.0 / (2.0 * s + 1.0));
    out.h_mu = std::pow(log_n / (n * m), 1.0 / (2.0 * s + 1.0));
    out.r_mu = std::pow(log_n / (n * m), s / (2.0 * s + 1.0));
    return out;
}

/// Spatially dependent rate r_{n,mu}(x).
inline double spatial_rate(long n, double s, const DesignDensity& mu, double x) {
    return std::pow(std::log(static_cast<double>(n)) / (n * mu(x)), s / (2.0 * s + 1.0));
}

} // namespace supreg
