#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "supreg/config.hpp"
#include "supreg/estimator.hpp"
#include "supreg/thread_pool.hpp"

namespace supreg {

/// beta(n, alpha) = sqrt( log(1/alpha) / (D_c (log n)^{2s/(2s+1)}) ).
inline double band_beta(long n, double s, double alpha, double Dc) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("band_beta: alpha must lie in (0,1)");
    if (!(Dc > 0.0)) throw std::domain_error("band_beta: Dc must be > 0");
    const double log_n = std::log(static_cast<double>(n));
    return std::sqrt(std::log(1.0 / alpha) /
                     (Dc * std::pow(log_n, 2.0 * s / (2.0 * s + 1.0))));
}

/// Confidence band around a fitted estimator with data-driven half-width
/// (1 + beta) P R_n(x), where R_n(x) = H_n(x_j)^s on [x_j, x_{j+1}).
class ConfidenceBand {
  public:
    ConfidenceBand(FittedEstimator est, double alpha, double Dc)
        : est_(std::move(est)), alpha_(alpha), Dc_(Dc),
          beta_(band_beta(est_.n(), est_.family().s(), alpha, Dc)) {}

    const FittedEstimator& estimator() const { return est_; }
    double alpha() const { return alpha_; }
    double Dc() const { return Dc_; }
    double beta() const { return beta_; }

    /// R_n(x): piecewise constant on the grid cells.
    double rate_envelope(double x) const {
        const auto j = est_.grid().cell(x);
        return std::pow(est_.grid().H[j], est_.family().s());
    }

    double halfwidth(double x) const {
        return (1.0 + beta_) * est_.family().sharp_constant() * rate_envelope(x);
    }

    double center(double x) const { return est_(x); }
    double lower(double x) const { return est_(x) - halfwidth(x); }
    double upper(double x) const { return est_(x) + halfwidth(x); }

  private:
    FittedEstimator est_;
    double alpha_;
    double Dc_;
    double beta_;
};

inline ConfidenceBand make_band(FittedEstimator e, double alpha, double Dc) {
    return ConfidenceBand(std::move(e), alpha, Dc);
}

/// Smallest (1 + beta) multiplier that would make the band contain f at
/// every check point: sup_x |fhat(x) - f(x)| / (P R_n(x)). Evaluated on
/// a uniform grid joined with the grid points, the same predicate
/// simultaneous_cover uses, so coverage is monotone in beta.
inline double required_band_factor(const FittedEstimator& e, const TargetFunction& f,
                                   std::size_t grid_count) {
    const double P = e.family().sharp_constant();
    const double s = e.family().s();
    double worst = 0.0;
    const auto check = [&](double x) {
        const auto j = e.grid().cell(x);
        const double envelope = P * std::pow(e.grid().H[j], s);
        worst = std::max(worst, std::abs(e(x) - f(x)) / envelope);
    };
    for (std::size_t i = 0; i <= grid_count; ++i)
        check(static_cast<double>(i) / static_cast<double>(grid_count));
    for (double x : e.grid().points) check(x);
    return worst;
}

/// True iff f lies inside the band at every point of a uniform grid of
/// `grid_count` cells joined with the discretization points.
inline bool simultaneous_cover(const ConfidenceBand& b, const TargetFunction& f,
                               std::size_t grid_count) {
    if (grid_count < 10 * b.estimator().grid().M())
        throw std::invalid_argument("simultaneous_cover: grid too coarse, need >= 10 M_n");
    return required_band_factor(b.estimator(), f, grid_count) <= 1.0 + b.beta();
}

struct CalibrationResult {
    double Dc = 0.0;
    double achieved_coverage = 0.0;
    int iterations = 0;
};

/// Empirical calibration of the band constant D_c: simulate `seeds`
/// replicates under the config, cache the minimal covering factor of
/// each, and bisect D_c over [1e-3, 1e3] (log scale) until the
/// simultaneous coverage at level alpha is within +-0.02 of the target.
/// Coverage evaluated from the cached factors is identical to re-running
/// simultaneous_cover per iterate, and monotone non-increasing in D_c.
inline CalibrationResult calibrate_Dc(const ExperimentConfig& cfg, double alpha,
                                      double target, int seeds) {
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("calibrate_Dc: target must lie in (0,1)");
    if (seeds < 100) throw std::invalid_argument("calibrate_Dc: need >= 100 seeds");

    const auto f = cfg.target();
    const auto mu = cfg.design();
    const long n = cfg.n_values.front();
    const double sigma_d = cfg.data_sigma(f);
    const KernelFamily fam(cfg.s, cfg.estimator_sigma(f), cfg.L);

    std::vector<double> factor(static_cast<std::size_t>(seeds));
    parallel_for(seeds, cfg.threads, [&](long r) {
        const auto seed = derive_seed(cfg.seed, Stream::calibration,
                                      static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(r));
        const auto ds = generate_dataset(f, mu, sigma_d, n, seed);
        const auto est = fit(ds, fam, cfg.Q);
        factor[static_cast<std::size_t>(r)] =
            required_band_factor(est, f, 10 * est.grid().M());
    });

    const double s = cfg.s;
    const auto coverage = [&](double Dc) {
        const double limit = 1.0 + band_beta(n, s, alpha, Dc);
        long covered = 0;
        for (double v : factor)
            if (v <= limit) ++covered;
        return static_cast<double>(covered) / static_cast<double>(seeds);
    };

    double lo = 1e-3, hi = 1e3;
    double cov_lo = coverage(lo), cov_hi = coverage(hi);
    if (cov_lo < cov_hi - 1e-12)
        throw std::logic_error("calibrate_Dc: coverage not monotone in Dc");
    const double tol = 0.02;
    if ((cov_lo - target) * (cov_hi - target) > 0.0 && std::abs(cov_lo - target) > tol &&
        std::abs(cov_hi - target) > tol)
        throw std::runtime_error(
            "calibrate_Dc: coverage at both bracket endpoints lies on the same side "
            "of the target; no D_c in [1e-3, 1e3] attains it");

    // run the bisection to convergence and keep the candidate closest to
    // the target (ties resolved toward coverage >= target); stopping at
    // the first in-window iterate could sit at the low edge of the +-0.02
    // band and undershoot on fresh replicates
    CalibrationResult best{lo, cov_lo, 0};
    const auto better = [&](double cov, double incumbent) {
        const double d = std::abs(cov - target), di = std::abs(incumbent - target);
        if (d != di) return d < di;
        return cov > incumbent;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double cov = coverage(mid);
        if (better(cov, best.achieved_coverage)) {
            best.Dc = mid;
            best.achieved_coverage = cov;
        }
        best.iterations = it + 1;
        if (cov > target) lo = mid; // coverage decreases with Dc
        else hi = mid;
        if (hi / lo < 1.0 + 1e-12) break;
    }
    if (std::abs(best.achieved_coverage - target) > tol)
        throw std::runtime_error(
            "calibrate_Dc: no D_c reached the target coverage within 0.02");
    return best;
}

} // namespace supreg
