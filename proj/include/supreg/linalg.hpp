#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace supreg {

/// Dense row-major square matrix, sized for local polynomial systems
/// (dimension k+1 with k <= 8).
class SquareMatrix {
  public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t dim, double fill = 0.0)
        : dim_(dim), a_(dim * dim, fill) {}

    std::size_t dim() const { return dim_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    static SquareMatrix identity(std::size_t dim) {
        SquareMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    void add_diagonal(double c) {
        for (std::size_t i = 0; i < dim_; ++i) a_[i * dim_ + i] += c;
    }

  private:
    std::size_t dim_ = 0;
    std::vector<double> a_;
};

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Off-diagonal threshold 1e-13, at most 100 sweeps.
inline std::vector<double> jacobi_eigenvalues(SquareMatrix a) {
    const std::size_t n = a.dim();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
        if (off < 1e-13) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    return ev;
}

inline double smallest_eigenvalue(const SquareMatrix& a) {
    const auto ev = jacobi_eigenvalues(a);
    double lo = ev.front();
    for (double v : ev) lo = std::min(lo, v);
    return lo;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(SquareMatrix a, std::vector<double> b) {
    const std::size_t n = a.dim();
    if (b.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0) throw std::runtime_error("solve_linear: singular matrix");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a(r, col) / a(col, col);
            if (m == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= m * a(col, c);
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
        x[i] = acc / a(i, i);
    }
    return x;
}

} // namespace supreg
