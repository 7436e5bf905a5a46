#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "supreg/bandwidth.hpp"
#include "supreg/grid.hpp"
#include "supreg/rng.hpp"

using namespace supreg;

namespace {

/// Independent oracle: scan h over the grid {0, 1e-6, 2e-6, ..., 1} and
/// return the first value satisfying h^s >= sqrt(log n / (n mass(I(x,h)))).
/// The in-window count advances incrementally with h.
double brute_force_bandwidth(const Dataset& d, double x, double s) {
    const long n = d.n();
    const double log_n = std::log(static_cast<double>(n));
    const auto& xs = d.sorted_x();
    std::vector<double> dist;
    if (x <= 0.5) {
        for (double xi : xs)
            if (xi >= x) dist.push_back(xi - x);
    } else {
        for (double xi : xs)
            if (xi <= x) dist.push_back(x - xi);
        std::sort(dist.begin(), dist.end());
    }
    const double step = 1e-6;
    std::size_t count = 0;
    for (long i = 0; i <= 1000000; ++i) {
        const double h = static_cast<double>(i) * step;
        while (count < dist.size() && dist[count] <= h) ++count;
        if (count == 0) continue;
        const double rhs = std::sqrt(log_n / static_cast<double>(count));
        if (std::pow(h, s) >= rhs) return h;
    }
    return 1.0;
}

Dataset random_dataset(long n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = rng.uniform01();
    return Dataset(std::move(x), std::vector<double>(static_cast<std::size_t>(n), 0.0), {});
}

} // namespace

TEST_CASE("bandwidth agrees with the brute-force oracle", "[bandwidth]") {
    Rng rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const long n = 50 + static_cast<long>(rng.uniform01() * 1950.0);
        const auto d = random_dataset(n, 1000 + static_cast<std::uint64_t>(trial));
        const double s = trial % 2 == 0 ? 1.0 : 0.5;
        for (int j = 0; j < 5; ++j) {
            const double x = rng.uniform01();
            const double exact = bandwidth(d, x, s).value;
            const double scan = brute_force_bandwidth(d, x, s);
            INFO("n=" << n << " x=" << x << " s=" << s);
            REQUIRE(std::abs(exact - scan) <= 1e-6);
        }
    }
}

TEST_CASE("equispaced design bandwidth near the continuum balance", "[bandwidth]") {
    const long n = 1000;
    std::vector<double> x(n);
    for (long i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    const Dataset d(std::move(x), std::vector<double>(n, 0.0), {});
    const auto bw = bandwidth(d, 0.5, 1.0);
    const double continuum = std::pow(std::log(1000.0) / 1000.0, 1.0 / 3.0);
    CHECK_FALSE(bw.fallback);
    CHECK(std::abs(bw.value - continuum) <= 1.0 / n);
}

TEST_CASE("single-point sample gives the distance to it", "[bandwidth]") {
    const Dataset d({0.4}, {0.0}, {});
    const auto bw = bandwidth(d, 0.3, 1.0); // log 1 = 0: any nonempty window works
    CHECK(bw.value == Catch::Approx(0.1).margin(1e-15));
    CHECK_FALSE(bw.fallback);
}

TEST_CASE("bandwidth respects the deterministic lower bound", "[bandwidth]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = random_dataset(400, seed);
        for (double s : {0.5, 1.0}) {
            const double lower =
                std::pow(std::log(400.0) / 400.0, 1.0 / (2.0 * s));
            Rng rng(seed + 50);
            for (int i = 0; i < 10; ++i) {
                const auto bw = bandwidth(d, rng.uniform01(), s);
                REQUIRE(bw.value >= lower - 1e-15);
            }
        }
    }
}

TEST_CASE("adding in-window points never widens the bandwidth", "[bandwidth]") {
    const auto d = random_dataset(200, 9);
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = rng.uniform01();
        const auto h0 = bandwidth(d, x, 1.0).value;
        auto pts = d.x();
        // add five points inside I(x, h0)
        for (int i = 0; i < 5; ++i) {
            const double off = rng.uniform01() * h0;
            pts.push_back(x <= 0.5 ? std::min(1.0, x + off) : std::max(0.0, x - off));
        }
        const Dataset aug(std::move(pts), std::vector<double>(205, 0.0), {});
        const auto h1 = bandwidth(aug, x, 1.0).value;
        REQUIRE(h1 <= h0 + 1e-15);
    }
}

TEST_CASE("deterministic bandwidth quantities", "[bandwidth]") {
    const auto mu = uniform_design();
    const auto db = deterministic_bandwidths(1000, 1.0, 1.0, 1.0, mu, 0.37);
    CHECK(db.r_mu == Catch::Approx(0.19044912476405547).margin(1e-12));
    CHECK(db.h_mu == Catch::Approx(std::pow(std::log(1000.0) / 1000.0, 1.0 / 3.0)).margin(1e-14));
    CHECK(db.t_n / db.h_n ==
          Catch::Approx(std::pow(std::log(1000.0), -1.0 / 3.0)).margin(1e-12));

    // doubling the density scales the rate by 2^{-s/(2s+1)}
    const DesignDensity half([](double x) { return x < 0.5 ? 1.5 : 0.5; }, 0.5, "step");
    const double r_lo = deterministic_bandwidths(1000, 1.0, 1.0, 1.0, half, 0.9).r_mu;
    const double r_hi = deterministic_bandwidths(1000, 1.0, 1.0, 1.0, half, 0.1).r_mu;
    CHECK(r_hi / r_lo == Catch::Approx(std::pow(3.0, -1.0 / 3.0)).margin(1e-12));
}

TEST_CASE("grid layout for n = 1000", "[bandwidth]") {
    const auto mu = uniform_design();
    Dataset d(sample_design(mu, 1000, 3), std::vector<double>(1000, 0.0), {});
    const KernelFamily fam(1.0, 1.0, 1.0);
    const auto g = make_grid(d, fam);

    const double expected_delta =
        std::pow(std::log(1000.0), -2.0 / 3.0) * std::pow(1000.0, -1.0 / 3.0);
    CHECK(g.delta == Catch::Approx(expected_delta).margin(1e-15));
    CHECK(g.M() == 37); // floor(1/Delta) = 36 plus the forced endpoint
    CHECK(g.points.size() == 38);
    CHECK(g.points.front() == 0.0);
    CHECK(g.points.back() == 1.0);
    for (std::size_t j = 0; j + 2 < g.points.size(); ++j)
        CHECK(g.points[j + 1] - g.points[j] == Catch::Approx(g.delta).margin(1e-15));
    // the forced final cell is shorter
    CHECK(g.points[g.M()] - g.points[g.M() - 1] <= g.delta + 1e-15);

    CHECK(g.tau <= g.delta_n + 1e-15);
    for (std::size_t j = 0; j < g.points.size(); ++j) {
        const double x = g.points[j];
        const Zone z = g.zone[j];
        if (x <= g.tau) CHECK(z == Zone::left);
        else if (x >= 1.0 - g.tau) CHECK(z == Zone::right);
        else CHECK(z == Zone::interior);
    }
}

TEST_CASE("grid rejects degenerate samples", "[bandwidth]") {
    Dataset d({0.1, 0.5, 0.9}, {0.0, 0.0, 0.0}, {});
    CHECK_THROWS_AS(make_grid(d, KernelFamily(1.0, 1.0, 1.0)), std::invalid_argument);
}

TEST_CASE("cell lookup matches the half-open convention", "[bandwidth]") {
    const auto mu = uniform_design();
    Dataset d(sample_design(mu, 256, 8), std::vector<double>(256, 0.0), {});
    const auto g = make_grid(d, KernelFamily(1.0, 1.0, 1.0));
    CHECK(g.cell(0.0) == 0);
    CHECK(g.cell(1.0) == g.M() - 1); // x = 1 belongs to the final cell
    for (std::size_t j = 0; j + 1 < g.points.size(); ++j) {
        CHECK(g.cell(g.points[j]) == j);
        const double mid = 0.5 * (g.points[j] + g.points[j + 1]);
        CHECK(g.cell(mid) == j);
    }
    CHECK_THROWS_AS(g.cell(-0.01), std::domain_error);
    CHECK_THROWS_AS(g.cell(1.01), std::domain_error);
}
