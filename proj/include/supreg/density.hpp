#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "supreg/quadrature.hpp"
#include "supreg/rng.hpp"

namespace supreg {

/// Design density on [0,1], bounded below by q > 0, with a tabulated
/// CDF for inverse transform sampling. The Hoelder parameters (nu, rho)
/// of the density are recorded as metadata only; nothing consumes them.
class DesignDensity {
  public:
    static constexpr int kCdfResolution = 1 << 14;

    DesignDensity(std::function<double(double)> pdf, double lower_bound,
                  std::string label, double nu = 1.0, double rho = 1.0)
        : pdf_(std::move(pdf)), q_(lower_bound), label_(std::move(label)),
          nu_(nu), rho_(rho) {
        if (!(q_ > 0.0))
            throw std::invalid_argument("DesignDensity: lower bound q must be > 0");
        build_cdf();
        for (int i = 0; i <= 10000; ++i) {
            const double x = static_cast<double>(i) / 10000.0;
            if (pdf_(x) < q_ * (1.0 - 1e-12))
                throw std::invalid_argument("DesignDensity '" + label_ +
                                            "': density drops below its stated bound q");
        }
        if (std::abs(cdf_.back() - 1.0) >= 1e-8)
            throw std::invalid_argument("DesignDensity '" + label_ +
                                        "': density does not integrate to 1");
    }

    double operator()(double x) const { return pdf_(x); }
    double lower_bound() const { return q_; }
    const std::string& label() const { return label_; }
    double holder_nu() const { return nu_; }
    double holder_rho() const { return rho_; }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return cdf_.back();
        const double pos = x * kCdfResolution;
        const auto i = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(i);
        return cdf_[i] * (1.0 - w) + cdf_[i + 1] * w;
    }

    /// Inverse CDF by binary search over the monotone table plus linear
    /// interpolation inside the bracketing cell.
    double quantile(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= cdf_.back()) return 1.0;
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
        const double g0 = cdf_[i], g1 = cdf_[i + 1];
        const double x0 = static_cast<double>(i) / kCdfResolution;
        const double x1 = static_cast<double>(i + 1) / kCdfResolution;
        if (g1 <= g0) return x0;
        return x0 + (u - g0) / (g1 - g0) * (x1 - x0);
    }

  private:
    void build_cdf() {
        cdf_.resize(kCdfResolution + 1);
        cdf_[0] = 0.0;
        for (int i = 0; i < kCdfResolution; ++i) {
            const double a = static_cast<double>(i) / kCdfResolution;
            const double b = static_cast<double>(i + 1) / kCdfResolution;
            cdf_[i + 1] = cdf_[i] + integrate(pdf_, a, b, 1e-13, 20);
        }
    }

    std::function<double(double)> pdf_;
    double q_;
    std::string label_;
    double nu_, rho_;
    std::vector<double> cdf_;
};

inline DesignDensity uniform_design() {
    return DesignDensity([](double) { return 1.0; }, 1.0, "uniform");
}

/// mu(x) = 0.05 + 11.4 |x - 0.5|^2: mass pushed toward the edges, scarce
/// data in the middle. Integrates to 1 exactly.
inline DesignDensity edge_quadratic_design() {
    return DesignDensity(
        [](double x) { return 0.05 + 11.4 * (x - 0.5) * (x - 0.5); }, 0.05,
        "edge-quadratic");
}

/// Density from a CSV table of (x, mu(x)) rows covering [0,1]; values are
/// interpolated linearly and must already integrate to 1.
inline DesignDensity tabulated_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open density table: " + path);
    std::vector<double> xs, ms;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, m;
        if (row >> x >> m) {
            xs.push_back(x);
            ms.push_back(m);
        }
    }
    if (xs.size() < 2 || xs.front() != 0.0 || xs.back() != 1.0)
        throw std::runtime_error("density table must cover [0,1] with >= 2 rows: " + path);
    double q = ms[0];
    for (double m : ms) q = std::min(q, m);
    if (!(q > 0.0)) throw std::runtime_error("density table must be positive: " + path);
    auto pdf = [xs, ms](double x) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return ms.front();
        if (it == xs.end()) return ms.back();
        const auto i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ms[i - 1] * (1.0 - w) + ms[i] * w;
    };
    return DesignDensity(pdf, q, path);
}

/// Resolve a config label: builtin name or a table file path.
inline DesignDensity design_by_label(const std::string& label) {
    if (label == "uniform") return uniform_design();
    if (label == "edge-quadratic") return edge_quadratic_design();
    if (label.find(".csv") != std::string::npos) return tabulated_design(label);
    throw std::invalid_argument("unknown design density label: " + label);
}

/// n i.i.d. draws by inverse transform sampling; deterministic in the seed.
inline std::vector<double> sample_design(const DesignDensity& mu, long n,
                                         std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_design: n must be >= 1");
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& xi : x) xi = mu.quantile(rng.uniform01());
    return x;
}

} // namespace supreg
