#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "supreg/dataset.hpp"
#include "supreg/interval.hpp"
#include "supreg/linalg.hpp"

namespace supreg {

/// Least squares fit of monomials (y - x)^m, m = 0..k, in the empirical
/// inner product over an interval, with the smallest-eigenvalue
/// regularization applied exactly when lambda(X_I) <= 1/sqrt(n bar mu_n(I)).
struct LocalFit {
    std::vector<double> theta;  // length k+1; zero vector when the interval is empty
    Interval I;
    int k = 0;
    double mass = 0.0;          // bar mu_n(I)
    bool regularized = false;   // ridge correction fired
    bool gamma_ok = false;      // min_{1<=m<=k} ||phi_{I,m}||_I >= 1/sqrt(n)
    double lambda_min = 0.0;    // smallest eigenvalue of the unregularized matrix
};

inline LocalFit lpa_fit(const Dataset& d, const Interval& I, int k) {
    if (k < 0) throw std::invalid_argument("lpa_fit: degree must be >= 0");
    LocalFit fit;
    fit.I = I;
    fit.k = k;
    fit.theta.assign(static_cast<std::size_t>(k) + 1, 0.0);

    const auto [first, last] = d.range(I.lo, I.hi);
    const auto count = last - first;
    const long n = d.n();
    fit.mass = static_cast<double>(count) / static_cast<double>(n);
    if (count == 0) return fit; // theta = 0 convention, gamma false

    // moments S_m = sum (X_i - x)^m and T_m = sum Y_i (X_i - x)^m over I
    const auto& xs = d.sorted_x();
    const auto& ys = d.sorted_y();
    std::vector<double> S(static_cast<std::size_t>(2 * k) + 1, 0.0);
    std::vector<double> T(static_cast<std::size_t>(k) + 1, 0.0);
    for (std::size_t i = first; i < last; ++i) {
        const double dx = xs[i] - I.anchor;
        double p = 1.0;
        for (std::size_t m = 0; m < S.size(); ++m) {
            S[m] += p;
            if (m < T.size()) T[m] += ys[i] * p;
            p *= dx;
        }
    }

    const auto dim = static_cast<std::size_t>(k) + 1;
    SquareMatrix X(dim);
    std::vector<double> Y(dim);
    const auto cnt = static_cast<double>(count);
    for (std::size_t p = 0; p < dim; ++p) {
        Y[p] = T[p] / cnt;
        for (std::size_t q = 0; q < dim; ++q) X(p, q) = S[p + q] / cnt;
    }

    fit.lambda_min = smallest_eigenvalue(X);
    const double ridge = 1.0 / std::sqrt(static_cast<double>(n) * fit.mass);
    if (fit.lambda_min <= ridge) {
        X.add_diagonal(ridge);
        fit.regularized = true;
    }
    fit.theta = solve_linear(X, Y);

    fit.gamma_ok = true; // vacuous for k = 0
    for (int m = 1; m <= k; ++m) {
        const double norm_sq = S[static_cast<std::size_t>(2 * m)] / cnt;
        if (std::sqrt(std::max(0.0, norm_sq)) < 1.0 / std::sqrt(static_cast<double>(n))) {
            fit.gamma_ok = false;
            break;
        }
    }
    return fit;
}

struct DerivativeEstimates {
    std::vector<double> deriv; // deriv[m-1] = m! theta_m, m = 1..k
    bool gamma_ok = false;
};

/// f^(m)(x_j) estimates from the fit on I(x_j, h_n), m = 1..k.
inline DerivativeEstimates derivative_estimates(const Dataset& d, double x_j, double h_n,
                                                int k) {
    const auto fit = lpa_fit(d, interval_at(x_j, h_n), k);
    DerivativeEstimates out;
    out.gamma_ok = fit.gamma_ok;
    out.deriv.resize(static_cast<std::size_t>(k));
    double factorial = 1.0;
    for (int m = 1; m <= k; ++m) {
        factorial *= m;
        out.deriv[static_cast<std::size_t>(m) - 1] =
            factorial * fit.theta[static_cast<std::size_t>(m)];
    }
    return out;
}

/// Boundary value: intercept of the fit on I(x_j, t_n).
inline double boundary_estimate(const Dataset& d, double x_j, double t_n, int k) {
    return lpa_fit(d, interval_at(x_j, t_n), k).theta[0];
}

/// Reference moments chi_m = (1 + (-1)^m) / (2 (m + 1)) and the Gram
/// matrix (G)_{pq} = chi_{p+q} / sqrt(chi_{2p} chi_{2q}). Diagnostic only.
struct ReferenceGram {
    int k = 0;
    SquareMatrix G;
    double lambda = 0.0;
    std::vector<double> chi; // chi_0 .. chi_{2k}
};

inline ReferenceGram reference_gram(int k) {
    if (k < 0 || k > 8) throw std::invalid_argument("reference_gram: need 0 <= k <= 8");
    ReferenceGram out;
    out.k = k;
    out.chi.resize(static_cast<std::size_t>(2 * k) + 1);
    for (int m = 0; m <= 2 * k; ++m)
        out.chi[static_cast<std::size_t>(m)] =
            (1.0 + (m % 2 == 0 ? 1.0 : -1.0)) / (2.0 * (m + 1.0));
    const auto dim = static_cast<std::size_t>(k) + 1;
    out.G = SquareMatrix(dim);
    for (std::size_t p = 0; p < dim; ++p)
        for (std::size_t q = 0; q < dim; ++q)
            out.G(p, q) = out.chi[p + q] / std::sqrt(out.chi[2 * p] * out.chi[2 * q]);
    out.lambda = smallest_eigenvalue(out.G);
    return out;
}

} // namespace supreg
