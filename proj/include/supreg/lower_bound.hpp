#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "supreg/bandwidth.hpp"
#include "supreg/density.hpp"
#include "supreg/interval.hpp"
#include "supreg/kernels.hpp"
#include "supreg/rng.hpp"
#include "supreg/target.hpp"

namespace supreg {

/// Hardest cubical subfamily: disjoint +/- bumps
///
///     f(x; theta) = sum_j theta_j L c^s h_j^s phi_s((x - x_j)/(c h_j))
///
/// with centers x_j = a + j Xi spaced so that adjacent bump supports stay
/// separated by the gap the Hoelder membership argument needs.
struct CubicalFamily {
    KernelFamily fam;
    Interval I_n;              // [a_n, b_n]
    double xi = 0.0;           // center spacing Xi_n
    double h_sup = 0.0;        // max over I_n of h_{n,mu}
    double eps = 0.0;
    int M = 0;                 // number of bumps
    std::vector<double> centers;
    std::vector<double> h;     // h_j = h_{n,mu}(x_j)

    /// Bump support [x_j - c T h_j, x_j + c T h_j].
    Interval bump_support(int j) const {
        const double half = fam.c() * fam.support() * h[static_cast<std::size_t>(j)];
        const double x = centers[static_cast<std::size_t>(j)];
        return Interval{x - half, x + half, x};
    }

    /// Member for theta in [-1, 1]^M (any theta is accepted; the hypercube
    /// vertices used in the risk argument carry |theta_j| = 1 - eps).
    std::function<double(double)> member(std::vector<double> theta) const {
        if (static_cast<int>(theta.size()) != M)
            throw std::invalid_argument("CubicalFamily::member: theta length mismatch");
        for (double t : theta)
            if (t < -1.0 || t > 1.0)
                throw std::invalid_argument("CubicalFamily::member: theta outside [-1,1]");
        const double L = fam.holder_radius();
        const double c = fam.c();
        const double s = fam.s();
        auto centers_c = centers;
        auto h_c = h;
        KernelFamily f = fam;
        return [theta = std::move(theta), centers_c, h_c, f, L, c, s](double x) {
            double v = 0.0;
            for (std::size_t j = 0; j < centers_c.size(); ++j) {
                const double hj = h_c[j];
                const double u = (x - centers_c[j]) / (c * hj);
                if (std::abs(u) < f.support())
                    v += theta[j] * L * std::pow(c * hj, s) * f.phi(u);
            }
            return v;
        };
    }

    /// Random vertex of the hypercube: theta_j = +/- (1 - eps).
    std::vector<double> random_vertex(Rng& rng) const {
        std::vector<double> theta(static_cast<std::size_t>(M));
        for (auto& t : theta) t = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * (1.0 - eps);
        return theta;
    }

    TargetFunction member_target(std::vector<double> theta, const std::string& label) const {
        return TargetFunction{member(std::move(theta)), fam.s(), fam.holder_radius(),
                              peak_value(), label};
    }

    /// |f(x_j; theta)| at a center with |theta_j| = 1: L c^s h_j^s phi_s(0).
    double peak_value(int j = -1) const {
        double hj = h_sup;
        if (j >= 0) hj = h[static_cast<std::size_t>(j)];
        return fam.holder_radius() * std::pow(fam.c() * hj, fam.s()) * fam.phi0();
    }
};

/// Spacing Xi_n = 2 T c (2^{1/(s-k)} + 1) h_sup and centers a + j Xi,
/// j = 1..M with M = floor(|I_n| / Xi). h_sup is maximized over a 10^3
/// grid of I_n since the density is a black box.
inline CubicalFamily build_family(const KernelFamily& fam, const DesignDensity& mu, long n,
                                  const Interval& I_n, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("build_family: eps must lie in (0,1)");
    CubicalFamily c{fam, I_n, 0.0, 0.0, eps, 0, {}, {}};
    const double s = fam.s();
    const int k = fam.degree();

    for (int i = 0; i <= 1000; ++i) {
        const double x = I_n.lo + (I_n.hi - I_n.lo) * static_cast<double>(i) / 1000.0;
        c.h_sup = std::max(c.h_sup, deterministic_bandwidths(n, s, fam.sigma(),
                                                             fam.holder_radius(), mu, x)
                                        .h_mu);
    }
    c.xi = 2.0 * fam.support() * fam.c() *
           (std::pow(2.0, 1.0 / (s - static_cast<double>(k))) + 1.0) * c.h_sup;
    c.M = static_cast<int>(std::floor(I_n.length() / c.xi));
    if (c.M == 0)
        throw std::invalid_argument("build_family: interval too small, no bump fits");
    for (int j = 1; j <= c.M; ++j) {
        const double x_j = I_n.lo + static_cast<double>(j) * c.xi;
        c.centers.push_back(x_j);
        c.h.push_back(deterministic_bandwidths(n, s, fam.sigma(), fam.holder_radius(), mu, x_j)
                          .h_mu);
    }
    return c;
}

struct MembershipReport {
    bool pass = false;
    double worst_ratio = 0.0;
    int trials = 0;
};

/// Hoelder membership of random hypercube vertices, checked numerically
/// on a fine grid.
inline MembershipReport verify_membership(const CubicalFamily& c, int trials,
                                          std::uint64_t seed, int grid = 4000) {
    if (trials < 10) throw std::invalid_argument("verify_membership: need >= 10 trials");
    Rng rng(derive_seed(seed, Stream::membership));
    MembershipReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const auto member = c.member(c.random_vertex(rng));
        const auto hc = holder_check(member, c.fam.s(), c.fam.holder_radius(), grid);
        rep.worst_ratio = std::max(rep.worst_ratio, hc.worst_ratio);
    }
    rep.pass = rep.worst_ratio <= 1.0 + 1e-6;
    return rep;
}

} // namespace supreg
