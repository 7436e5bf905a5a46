#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "supreg/quadrature.hpp"

namespace supreg {

/// Optimal recovery function phi_s, kernel K_s = phi_s / int(phi_s) and the
/// sharp constants derived from them, for a given smoothness s, noise level
/// sigma and Hoelder radius L. Closed forms exist for s in (0,1]; for s = 2
/// phi_s is the piecewise quadratic extremal rescaled to unit Hoelder
/// constant and unit L2 norm. Everything is computed once at construction
/// and immutable afterwards.
class KernelFamily {
  public:
    KernelFamily(double s, double sigma, double L) : s_(s), sigma_(sigma), L_(L) {
        if (!(sigma > 0.0)) throw std::invalid_argument("KernelFamily: sigma must be > 0");
        if (!(L > 0.0)) throw std::invalid_argument("KernelFamily: L must be > 0");
        const bool low = s > 0.0 && s <= 1.0;
        const bool two = s == 2.0;
        if (!low && !two)
            throw std::invalid_argument(
                "KernelFamily: the optimal recovery function is only known for "
                "s in (0,1] or s = 2; got unsupported smoothness");

        c_ = std::pow(sigma / L, 2.0 / (2.0 * s + 1.0)) *
             std::pow(2.0 / (2.0 * s + 1.0), 1.0 / (2.0 * s + 1.0));

        if (low) {
            phi0_ = std::pow((2.0 * s + 1.0) * (s + 1.0) / (4.0 * s * s), s / (2.0 * s + 1.0));
            T_ = std::pow(phi0_, 1.0 / s);
            int_phi_ = 2.0 * s / (s + 1.0) * std::pow(phi0_, (s + 1.0) / s);
            norm_k2_ = 1.0 / int_phi_; // ||phi_s||_2 = 1, so ||K_s||_2 = 1/int(phi_s)
            b1_ = phi0_ - norm_k2_;
        } else {
            build_s2();
        }

        P_ = std::pow(sigma, 2.0 * s / (2.0 * s + 1.0)) * std::pow(L, 1.0 / (2.0 * s + 1.0)) *
             phi0_ * std::pow(2.0 / (2.0 * s + 1.0), s / (2.0 * s + 1.0));
    }

    double s() const { return s_; }
    double sigma() const { return sigma_; }
    double holder_radius() const { return L_; }
    /// Largest integer strictly below s (local polynomial degree).
    int degree() const { return static_cast<int>(std::ceil(s_)) - 1; }

    double phi0() const { return phi0_; }
    double support() const { return T_; }
    double c() const { return c_; }
    double sharp_constant() const { return P_; }
    double bias_constant() const { return b1_; }
    double kernel_l2_norm() const { return norm_k2_; }
    double phi_integral() const { return int_phi_; }

    /// s = 2 auxiliaries (throw for s <= 1 where they are unset).
    double q() const { return require_s2("q"), q_; }
    double theta() const { return require_s2("theta"), theta_; }

    /// phi_s(t); identically 0 outside [-T, T].
    double phi(double t) const {
        const double u = std::abs(t);
        if (u >= T_) return 0.0;
        if (s_ <= 1.0) return phi0_ * (1.0 - std::pow(u, s_) / phi0_);
        return amp_scale_ * g2(inner_scale_ * u);
    }

    /// K_s(t) = phi_s(t) / int(phi_s).
    double kernel(double t) const { return phi(t) / int_phi_; }

    /// Minimax optimal recovery error E_s(eps, L) = phi_s(0) L^{1/(2s+1)} eps^{2s/(2s+1)}.
    double minimax_error(double eps) const {
        if (eps < 0.0) throw std::invalid_argument("minimax_error: eps must be >= 0");
        if (eps == 0.0) return 0.0;
        return phi0_ * std::pow(L_, 1.0 / (2.0 * s_ + 1.0)) *
               std::pow(eps, 2.0 * s_ / (2.0 * s_ + 1.0));
    }

    /// Quadrature knots adapted to the breakpoints of phi_s on [-T, T].
    std::vector<double> quad_knots() const {
        std::vector<double> k{-T_, 0.0, T_};
        if (s_ == 2.0) {
            for (double t : odd_) {
                const double x = t / inner_scale_;
                if (x < T_) {
                    k.push_back(x);
                    k.push_back(-x);
                }
            }
        }
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }

    /// Piecewise quadratic extremal for s = 2 (even extension). Breakpoint
    /// t_{2j} sequence increases to t_inf = 2 sqrt(1+q)/(1 - sqrt(q)).
    const std::vector<double>& breakpoints_even() const { return even_; }
    const std::vector<double>& breakpoints_odd() const { return odd_; }
    double t_inf() const { return require_s2("t_inf"), t_inf_; }

  private:
    void require_s2(const char* what) const {
        if (s_ != 2.0) throw std::logic_error(std::string(what) + " is only defined for s = 2");
    }

    void build_s2() {
        q_ = std::pow(3.0 + std::sqrt(33.0) - std::sqrt(26.0 + 6.0 * std::sqrt(33.0)), 2) / 16.0;
        const double rq = std::sqrt(q_);
        const double r1q = std::sqrt(1.0 + q_);
        theta_ = 2.0 * (23.0 * q_ * q_ - 14.0 * q_ + 23.0) * r1q /
                 (30.0 * (1.0 - std::pow(q_, 2.5)));
        t_inf_ = 2.0 * r1q / (1.0 - rq);

        // Breakpoints of g2 until the piece width drops below 1e-14; the
        // geometric tail beyond that is below double precision noise.
        double t2j = 0.0;
        for (int j = 0;; ++j) {
            const double width = std::pow(q_, 0.5 * j) * r1q;
            even_.push_back(t2j);
            odd_.push_back(t2j + width);
            amp_.push_back((j % 2 == 0 ? 1.0 : -1.0) * std::pow(q_, j));
            if (width < 1e-14) break;
            t2j += 2.0 * r1q * std::pow(q_, 0.5 * j);
        }

        // Rescale a*g2(b*t) to unit Hoelder-2 constant (a*b^2 = 1) and unit
        // L2 norm (a^2 * theta / b = 1, using ||g2||_2^2 = theta).
        amp_scale_ = std::pow(theta_, -0.4);
        inner_scale_ = std::pow(theta_, 0.2);
        phi0_ = amp_scale_; // g2(0) = 1
        T_ = t_inf_ / inner_scale_;

        const auto knots = [&] {
            std::vector<double> k{0.0};
            for (double t : odd_) k.push_back(std::min(t, t_inf_) / inner_scale_);
            k.push_back(T_);
            return k;
        }();
        int_phi_ = 2.0 * integrate([&](double t) { return phi(t); }, knots, 1e-12);
        const double half_sq = integrate([&](double t) { double p = phi(t); return p * p; },
                                         knots, 1e-12);
        norm_k2_ = std::sqrt(2.0 * half_sq) / int_phi_;
        b1_ = phi0_ - norm_k2_;
    }

    /// g2 on [0, t_inf), located by binary search over the odd breakpoints.
    double g2(double u) const {
        if (u >= t_inf_) return 0.0;
        const auto it = std::lower_bound(odd_.begin(), odd_.end(), u);
        if (it == odd_.end()) return 0.0; // truncated geometric tail
        const std::size_t j = static_cast<std::size_t>(it - odd_.begin());
        const double d = u - even_[j];
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        return amp_[j] - sign * 0.5 * d * d;
    }

    double s_, sigma_, L_;
    double phi0_ = 0.0, T_ = 0.0, c_ = 0.0, P_ = 0.0;
    double b1_ = 0.0, norm_k2_ = 0.0, int_phi_ = 0.0;
    // s = 2 only
    double q_ = 0.0, theta_ = 0.0, t_inf_ = 0.0;
    double amp_scale_ = 0.0, inner_scale_ = 0.0;
    std::vector<double> even_, odd_, amp_;
};

inline KernelFamily make_family(double s, double sigma, double L) {
    return KernelFamily(s, sigma, L);
}

} // namespace supreg
