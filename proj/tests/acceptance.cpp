// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any fails. Budgets are wall-clock and enforced.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "supreg/band.hpp"
#include "supreg/experiments.hpp"
#include "supreg/lower_bound.hpp"

using namespace supreg;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
};

void run(const Criterion& c, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over budget");
    }
    std::printf("%s criterion %d (%s): %s[%.1f s / %.0f s]\n", ok ? "PASS" : "FAIL", c.id,
                c.name, detail.empty() ? "" : (detail + " ").c_str(), secs,
                c.budget_seconds);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- criterion 3 helper: grid-scan bandwidth oracle ----
// First h in {0, 1e-6, ..., 1} with h^s >= sqrt(log n / count(I(x,h))),
// restated as h >= (log n / count)^{1/(2s)} with thresholds precomputed
// per count so the scan body is branch + compare only.
double scan_bandwidth(const std::vector<double>& sorted_x, double x, double s, long n) {
    const double log_n = std::log(static_cast<double>(n));
    std::vector<double> dist;
    if (x <= 0.5) {
        for (double xi : sorted_x)
            if (xi >= x) dist.push_back(xi - x);
    } else {
        for (auto it = sorted_x.rbegin(); it != sorted_x.rend(); ++it)
            if (*it <= x) dist.push_back(x - *it);
    }
    std::vector<double> thr(dist.size() + 1, 0.0);
    for (std::size_t m = 1; m <= dist.size(); ++m)
        thr[m] = std::pow(log_n / static_cast<double>(m), 1.0 / (2.0 * s));
    const double step = 1e-6;
    std::size_t count = 0;
    for (long i = 0; i <= 1000000; ++i) {
        const double h = static_cast<double>(i) * step;
        while (count < dist.size() && dist[count] <= h) ++count;
        if (count > 0 && h >= thr[count]) return h;
    }
    return 1.0;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main() {
    // 1. kernel identities by quadrature
    run({1, "kernel identities", 1.0}, [](std::string& detail) {
        bool ok = true;
        for (double s : {0.25, 0.5, 0.75, 1.0, 2.0}) {
            const KernelFamily f(s, 1.0, 1.0);
            const auto knots = f.quad_knots();
            const double intK =
                integrate([&](double t) { return f.kernel(t); }, knots, 1e-12);
            const double intPhi2 = integrate(
                [&](double t) { const double p = f.phi(t); return p * p; }, knots, 1e-12);
            const double e1 = std::abs(intK - 1.0);
            const double e2 = std::abs(std::sqrt(intPhi2) - 1.0);
            if (e1 >= 1e-8 || e2 >= 1e-6) {
                ok = false;
                detail += "s=" + fmt(s) + " intK err " + fmt(e1) + " phi norm err " + fmt(e2);
            }
        }
        if (ok) detail = "s in {0.25,0.5,0.75,1,2}: |int K - 1| < 1e-8, |norm phi - 1| < 1e-6";
        return ok;
    });

    // 2. sharp constants
    run({2, "sharp constants", 10.0}, [](std::string& detail) {
        bool ok = true;
        const KernelFamily f1(1.0, 1.0, 1.0);
        ok &= std::abs(f1.sharp_constant() - 1.0) < 1e-12;
        ok &= std::abs(f1.c() - std::pow(2.0 / 3.0, 1.0 / 3.0)) < 1e-12;
        for (double s : {0.25, 0.5, 0.75, 1.0}) {
            const KernelFamily f(s, 1.0, 1.0);
            const double v = integrate(
                [&](double t) { return f.kernel(t) * std::pow(std::abs(t), s); },
                f.quad_knots(), 1e-12);
            ok &= std::abs(v - (f.phi0() - f.kernel_l2_norm())) < 1e-8;
        }
        // 50-digit evaluations of the closed-form radicals, frozen up front
        const KernelFamily f2(2.0, 1.0, 1.0);
        ok &= std::abs(f2.q() - 0.05862275952884605181) < 1e-10;
        ok &= std::abs(f2.theta() - 1.5280350954512663199) < 1e-10;
        ok &= std::abs(f2.sharp_constant() - 0.58501993451736681815) < 1e-10;
        if (ok)
            detail = "P(1)=1, c_1=(2/3)^{1/3}, decomposition via extremal |t|^s, "
                     "q/theta/P_2 vs high-precision references";
        return ok;
    });

    // 3. data-driven bandwidth against the grid-scan oracle
    run({3, "bandwidth oracle", 10.0}, [](std::string& detail) {
        Rng rng(20260809);
        double worst = 0.0;
        for (int d = 0; d < 100; ++d) {
            const long n = 50 + static_cast<long>(rng.uniform01() * 1950.0);
            std::vector<double> x(static_cast<std::size_t>(n));
            for (auto& v : x) v = rng.uniform01();
            const Dataset ds(std::move(x),
                             std::vector<double>(static_cast<std::size_t>(n), 0.0), {});
            const double s = (d % 2 == 0) ? 1.0 : 0.5;
            for (int j = 0; j < 20; ++j) {
                const double q = rng.uniform01();
                const double exact = bandwidth(ds, q, s).value;
                const double scan = scan_bandwidth(ds.sorted_x(), q, s, n);
                worst = std::max(worst, std::abs(exact - scan));
            }
        }
        detail = "100 datasets x 20 points, worst |exact - scan| = " + fmt(worst);
        return worst <= 1e-6;
    });

    // 4. local polynomial exactness on unregularized fits
    run({4, "local polynomial exactness", 5.0}, [](std::string& detail) {
        Rng rng(17);
        double worst = 0.0;
        int trials = 0;
        const struct { int k; long n; double wlo, whi; } plan[] = {
            {0, 2000, 0.05, 0.6}, {1, 50000, 0.55, 0.9}, {2, 400000, 0.93, 0.97}};
        for (const auto& p : plan) {
            std::vector<double> pts(static_cast<std::size_t>(p.n));
            for (long i = 0; i < p.n; ++i)
                pts[static_cast<std::size_t>(i)] =
                    (static_cast<double>(i) + 0.5) / static_cast<double>(p.n);
            for (int t = 0; t < 34 && trials < 100; ++t) {
                std::vector<double> coeffs(static_cast<std::size_t>(p.k) + 1);
                for (auto& c : coeffs) c = rng.uniform(-2.0, 2.0);
                const double width = rng.uniform(p.wlo, p.whi);
                const double anchor = (t % 2 == 0)
                                          ? rng.uniform(0.0, std::min(0.5, 1.0 - width))
                                          : rng.uniform(std::max(width, 0.500001), 1.0);
                std::vector<double> y(pts.size());
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    double v = 0.0, pw = 1.0;
                    for (double c : coeffs) {
                        v += c * pw;
                        pw *= pts[i] - anchor;
                    }
                    y[i] = v;
                }
                const Dataset ds(pts, std::move(y), {});
                const auto fit = lpa_fit(ds, interval_at(anchor, width), p.k);
                if (fit.regularized) continue; // exactness holds for the plain solve
                ++trials;
                for (std::size_t m = 0; m < coeffs.size(); ++m)
                    worst = std::max(worst, std::abs(fit.theta[m] - coeffs[m]));
            }
        }
        detail = std::to_string(trials) + " unregularized fits, worst coefficient error " +
                 fmt(worst);
        return trials == 100 && worst < 1e-8;
    });

    // 5. reference Gram diagnostics
    run({5, "reference Gram", 1.0}, [](std::string& detail) {
        const auto g1 = reference_gram(1);
        bool ok = g1.G(0, 0) == 1.0 && g1.G(1, 1) == 1.0 && g1.G(0, 1) == 0.0 &&
                  g1.G(1, 0) == 0.0;
        double min_lambda = 1e300;
        for (int k = 0; k <= 5; ++k) {
            const double l = reference_gram(k).lambda;
            ok &= l > 0.0;
            min_lambda = std::min(min_lambda, l);
        }
        detail = "k=1 identity exact, min lambda over k=0..5 is " + fmt(min_lambda);
        return ok;
    });

    // 6. zero-noise consistency
    run({6, "zero-noise consistency", 120.0}, [](std::string& detail) {
        const auto f = triangle_target();
        const auto mu = uniform_design();
        const KernelFamily fam(1.0, 1.0, 1.0); // estimator scale sigma_est = 1
        std::vector<double> med;
        for (long n : {1L << 10, 1L << 12, 1L << 14}) {
            std::vector<double> risks;
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto ds = generate_dataset(
                    f, mu, 0.0, n,
                    derive_seed(606, Stream::replicate, static_cast<std::uint64_t>(n), seed));
                risks.push_back(sup_risk(fit(ds, fam), f, mu, RiskNormalization::none).sup);
            }
            med.push_back(quantile(risks, 0.5));
        }
        detail = "raw sup risk medians " + fmt(med[0]) + " > " + fmt(med[1]) + " > " +
                 fmt(med[2]);
        return med[0] > med[1] && med[1] > med[2];
    });

    // 7. rate slope and desk-scale sharpness window
    run({7, "rate slope and normalized risk window", 900.0}, [](std::string& detail) {
        ExperimentConfig cfg;
        cfg.target_label = "triangle";
        cfg.s = cfg.L = 1.0;
        cfg.Q = 0.3;
        cfg.density = "uniform";
        cfg.n_values = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14};
        cfg.sigma = 1.0;
        cfg.replications = 50;
        cfg.seed = 7117;
        cfg.threads = 1;
        const auto report = rate_study(cfg);
        const double P = 1.0; // family (s=1, sigma=1, L=1)
        const double e14 = report.summary.back().q50;
        detail = "slope " + fmt(report.slope) + " (se " + fmt(report.slope_se) +
                 ", target 1/3), median normalized sup risk at n=2^14 is " + fmt(e14) +
                 " vs [0.5 P, 1.8 P], P=" + fmt(P);
        return report.slope >= 0.18 && report.slope <= 0.48 && e14 >= 0.5 * P &&
               e14 <= 1.8 * P;
    });

    // 8. band coverage and the inhomogeneity signature
    run({8, "coverage and inhomogeneous widths", 600.0}, [](std::string& detail) {
        ExperimentConfig cfg;
        cfg.target_label = "triangle";
        cfg.s = cfg.L = 1.0;
        cfg.Q = 0.3;
        cfg.density = "uniform";
        cfg.n_values = {2000};
        cfg.root_snr = 7.0;
        cfg.alpha = 0.05;
        cfg.Dc = -1.0; // calibrate
        cfg.calibration_seeds = 1000; // the required band factor concentrates,
                                      // so the calibrated quantile must be tight
        cfg.replications = 300;
        cfg.seed = 8842;
        cfg.threads = 1;
        const auto report = mc_coverage(cfg);
        const double coverage = report.summary.front().coverage;

        ExperimentConfig inhom = cfg;
        inhom.density = "edge-quadratic";
        inhom.Dc = report.Dc_used;
        const auto rep2 = mc_coverage(inhom);
        long wider_mid = 0;
        for (const auto& row : rep2.rows)
            if (row.hw[1] > row.hw[0]) ++wider_mid;
        const double frac =
            static_cast<double>(wider_mid) / static_cast<double>(rep2.rows.size());
        detail = "coverage " + fmt(coverage) + " (Dc " + fmt(report.Dc_used) +
                 "), mid-wider-than-edge fraction " + fmt(frac);
        return coverage >= 0.90 && frac >= 0.95;
    });

    // 9. hardest-subfamily membership
    run({9, "lower bound family", 30.0}, [](std::string& detail) {
        const KernelFamily fam(1.0, 1.0, 1.0);
        const auto c = build_family(fam, uniform_design(), 10000, make_interval(0.0, 1.0), 0.5);
        const auto rep = verify_membership(c, 50, 909, 4000);
        bool disjoint = true;
        for (int j = 0; j + 1 < c.M; ++j)
            disjoint &= c.bump_support(j).hi < c.bump_support(j + 1).lo;
        detail = std::to_string(c.M) + " bumps, 50 members, worst Hoelder ratio " +
                 fmt(rep.worst_ratio);
        return rep.pass && disjoint;
    });

    // 10. byte-identical reruns through the CLI, across pool sizes
    run({10, "determinism of risk and figures runs", 300.0}, [](std::string& detail) {
#ifndef SUPREG_CLI_PATH
        detail = "CLI path not configured";
        return false;
#else
        const std::string cli = SUPREG_CLI_PATH;
        const auto base = fs::temp_directory_path() / "supreg_acceptance";
        fs::remove_all(base);
        fs::create_directories(base);

        nlohmann::json jc;
        jc["target"] = {{"label", "triangle"}, {"s", 1.0}, {"L", 1.0}, {"Q", 0.3}};
        jc["density"] = "uniform";
        jc["n"] = {256};
        jc["sigma"] = 0.25;
        jc["replications"] = 8;
        jc["seed"] = 424242;
        const auto cfg_path = base / "risk.json";
        std::ofstream(cfg_path) << jc.dump(2);

        nlohmann::json jf = jc;
        jf["n"] = {500};
        jf["root_snr"] = 7.0;
        jf.erase("sigma");
        jf["alpha"] = 0.05;
        jf["Dc"] = "calibrate";
        jf["calibration_seeds"] = 100;
        const auto fig_path = base / "figures.json";
        std::ofstream(fig_path) << jf.dump(2);

        const auto shell = [&](const std::string& cmd) {
            const int rc = std::system(cmd.c_str());
            return rc == 0;
        };
        const std::string q = "\"";
        bool ok = true;
        for (const auto& [dir, jobs] :
             std::vector<std::pair<std::string, std::string>>{{"r1", "1"}, {"r2", "4"},
                                                              {"r3", "1"}}) {
            ok &= shell(q + cli + q + " risk -c " + cfg_path.string() + " -o " +
                        (base / dir).string() + " -j " + jobs + " --prefix risk >/dev/null");
            ok &= shell(q + cli + q + " figures -c " + fig_path.string() + " -o " +
                        (base / dir).string() + " -j " + jobs + " >/dev/null");
        }
        if (!ok) {
            detail = "CLI invocation failed";
            return false;
        }
        const std::vector<std::string> files = {
            "risk_replicates.csv", "risk_summary.csv",    "uniform_data.csv",
            "uniform_curve.csv",   "uniform_band.csv",    "uniform_plot.py",
            "edgequad_data.csv",   "edgequad_curve.csv",  "edgequad_band.csv",
            "edgequad_plot.py"};
        for (const auto& f : files) {
            const auto a = read_file(base / "r1" / f);
            const auto b = read_file(base / "r2" / f);
            const auto c = read_file(base / "r3" / f);
            if (a != b || a != c || a.rfind("<missing", 0) == 0) {
                detail = "mismatch or missing: " + f;
                return false;
            }
        }
        fs::remove_all(base);
        detail = "10 output files byte-identical across reruns and -j 1/4";
        return true;
#endif
    });

    if (g_failures == 0) std::printf("ALL CRITERIA PASSED\n");
    else std::printf("%d CRITERIA FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
