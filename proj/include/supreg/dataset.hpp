#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "supreg/density.hpp"
#include "supreg/interval.hpp"
#include "supreg/rng.hpp"
#include "supreg/target.hpp"

namespace supreg {

struct DatasetMeta {
    std::uint64_t seed = 0;
    double sigma = 0.0;
    std::string density_label;
    std::string target_label;
};

/// Immutable (X_i, Y_i) sample. Stores the generation order plus the
/// sorting permutation and sorted copies for interval queries.
class Dataset {
  public:
    Dataset(std::vector<double> x, std::vector<double> y, DatasetMeta meta)
        : x_(std::move(x)), y_(std::move(y)), meta_(std::move(meta)) {
        if (x_.size() != y_.size())
            throw std::invalid_argument("Dataset: x and y lengths differ");
        if (x_.empty()) throw std::invalid_argument("Dataset: empty sample");
        for (double xi : x_)
            if (xi < 0.0 || xi > 1.0)
                throw std::invalid_argument("Dataset: design point outside [0,1]");
        sort_index_.resize(x_.size());
        std::iota(sort_index_.begin(), sort_index_.end(), std::size_t{0});
        std::sort(sort_index_.begin(), sort_index_.end(),
                  [&](std::size_t a, std::size_t b) { return x_[a] < x_[b]; });
        xs_.reserve(x_.size());
        ys_.reserve(x_.size());
        for (std::size_t i : sort_index_) {
            xs_.push_back(x_[i]);
            ys_.push_back(y_[i]);
        }
    }

    long n() const { return static_cast<long>(x_.size()); }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }
    const std::vector<std::size_t>& sort_index() const { return sort_index_; }
    const std::vector<double>& sorted_x() const { return xs_; }
    const std::vector<double>& sorted_y() const { return ys_; }
    const DatasetMeta& meta() const { return meta_; }

    /// Index range [first, last) of sorted design points inside [lo, hi],
    /// endpoints inclusive.
    std::pair<std::size_t, std::size_t> range(double lo, double hi) const {
        const auto first = std::lower_bound(xs_.begin(), xs_.end(), lo);
        const auto last = std::upper_bound(xs_.begin(), xs_.end(), hi);
        return {static_cast<std::size_t>(first - xs_.begin()),
                static_cast<std::size_t>(last - xs_.begin())};
    }

  private:
    std::vector<double> x_, y_;
    DatasetMeta meta_;
    std::vector<std::size_t> sort_index_;
    std::vector<double> xs_, ys_;
};

/// Y_i = f(X_i) + sigma g_i with standard Gaussian g_i independent of the
/// design; the design and noise streams are decoupled splits of the
/// master seed, so the same master reproduces the dataset bit for bit.
inline Dataset generate_dataset(const TargetFunction& f, const DesignDensity& mu,
                                double sigma, long n, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("generate_dataset: sigma must be >= 0");
    auto x = sample_design(mu, n, derive_seed(seed, Stream::design));
    Rng noise(derive_seed(seed, Stream::noise));
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double g = noise.normal();
        y[i] = f(x[i]) + (sigma > 0.0 ? sigma * g : 0.0);
    }
    return Dataset(std::move(x), std::move(y),
                   DatasetMeta{seed, sigma, mu.label(), f.label});
}

/// Empirical mass bar mu_n(I) = #{i : X_i in I} / n, endpoints inclusive.
inline double empirical_mass(const Dataset& d, const Interval& I) {
    const auto [first, last] = d.range(I.lo, I.hi);
    return static_cast<double>(last - first) / static_cast<double>(d.n());
}

/// <g1, g2>_I: average of g1(X_i) g2(X_i) over the design points inside I.
/// Throws when the interval holds no points; callers that implement the
/// theta = 0 fallback check the mass first.
template <class F1, class F2>
double emp_inner_product(const Dataset& d, const Interval& I, const F1& g1, const F2& g2) {
    const auto [first, last] = d.range(I.lo, I.hi);
    if (first == last)
        throw std::domain_error("emp_inner_product: empty interval");
    double acc = 0.0;
    const auto& xs = d.sorted_x();
    for (std::size_t i = first; i < last; ++i) acc += g1(xs[i]) * g2(xs[i]);
    return acc / static_cast<double>(last - first);
}

} // namespace supreg
