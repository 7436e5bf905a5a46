#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "supreg/band.hpp"
#include "supreg/config.hpp"
#include "supreg/csv.hpp"
#include "supreg/estimator.hpp"
#include "supreg/thread_pool.hpp"

namespace supreg {

inline double quantile(std::vector<double> v, double p) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    const double w = pos - static_cast<double>(i);
    return v[i] * (1.0 - w) + v[i + 1] * w;
}

struct ReplicateRow {
    long n = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    double norm_sup = 0.0;
    double norm_disc = 0.0;
    double raw_sup = 0.0;
    double raw_disc = 0.0;
    bool bw_fallback = false;
    int covered = -1; // -1 when no band was evaluated
    double hw[3] = {0.0, 0.0, 0.0}; // band halfwidth at x = 0.1, 0.5, 0.9
};

struct NSummary {
    long n = 0;
    double q10 = 0.0, q50 = 0.0, q90 = 0.0; // normalized sup risk
    double raw_q50 = 0.0;
    double disc_q50 = 0.0;
    double coverage = -1.0;
    double mean_hw[3] = {0.0, 0.0, 0.0};
    double width_ratio[3] = {0.0, 0.0, 0.0}; // mean full width / r_{n,mu}(x)
    long fallback_count = 0;
};

/// Monte Carlo report: per-replicate risks keyed by (n, replicate index),
/// per-n quantiles, optional coverage and rate-slope blocks, and the
/// config hash + master seed for provenance. Identical config and seed
/// reproduce the serialized report byte for byte.
struct RiskReport {
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;
    std::string mode;
    std::vector<ReplicateRow> rows;
    std::vector<NSummary> summary;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double slope_se = std::numeric_limits<double>::quiet_NaN();
    double Dc_used = -1.0;
    double beta_used = -1.0;
    double calib_coverage = -1.0;

    void write(const std::string& outdir, const std::string& prefix) const {
        namespace fs = std::filesystem;
        fs::create_directories(outdir);
        const auto hash_hex = [this] {
            std::ostringstream os;
            os << std::hex << config_hash;
            return os.str();
        }();

        CsvWriter rep((fs::path(outdir) / (prefix + "_replicates.csv")).string());
        rep.meta("mode", mode);
        rep.meta("config_hash", hash_hex);
        rep.meta("master_seed", master_seed);
        rep.header({"n", "rep", "seed", "norm_sup", "norm_disc", "raw_sup", "raw_disc",
                    "bw_fallback", "covered", "hw_01", "hw_05", "hw_09"});
        for (const auto& r : rows)
            rep.row({static_cast<double>(r.n), static_cast<double>(r.rep),
                     static_cast<double>(r.seed), r.norm_sup, r.norm_disc, r.raw_sup,
                     r.raw_disc, r.bw_fallback ? 1.0 : 0.0, static_cast<double>(r.covered),
                     r.hw[0], r.hw[1], r.hw[2]});

        CsvWriter sum((fs::path(outdir) / (prefix + "_summary.csv")).string());
        sum.meta("mode", mode);
        sum.meta("config_hash", hash_hex);
        sum.meta("master_seed", master_seed);
        if (Dc_used > 0.0) {
            sum.meta("Dc", Dc_used);
            sum.meta("beta", beta_used);
            if (calib_coverage >= 0.0) sum.meta("calibration_coverage", calib_coverage);
        }
        if (!std::isnan(slope)) {
            sum.meta("rate_slope", slope);
            sum.meta("rate_slope_se", slope_se);
            sum.meta("rate_regressor", "log(log(n)/n) against log median raw_sup");
        }
        sum.header({"n", "norm_q10", "norm_q50", "norm_q90", "raw_q50", "disc_q50",
                    "coverage", "mean_hw_01", "mean_hw_05", "mean_hw_09", "width_ratio_01",
                    "width_ratio_05", "width_ratio_09", "fallback_count"});
        for (const auto& s : summary)
            sum.row({static_cast<double>(s.n), s.q10, s.q50, s.q90, s.raw_q50, s.disc_q50,
                     s.coverage, s.mean_hw[0], s.mean_hw[1], s.mean_hw[2], s.width_ratio[0],
                     s.width_ratio[1], s.width_ratio[2], static_cast<double>(s.fallback_count)});
    }
};

namespace detail {

inline constexpr double kProbeX[3] = {0.1, 0.5, 0.9};

/// Shared replicate loop. When `banded`, also resolves D_c (given or
/// calibrated) and records coverage plus band geometry.
inline RiskReport run_replicates(const ExperimentConfig& cfg, bool banded,
                                 const std::string& mode) {
    const auto f = cfg.target();
    const auto mu = cfg.design();
    const double sigma_d = cfg.data_sigma(f);
    const KernelFamily fam(cfg.s, cfg.estimator_sigma(f), cfg.L);

    RiskReport report;
    report.mode = mode;
    report.config_hash = cfg.hash();
    report.master_seed = cfg.seed;

    double Dc = cfg.Dc;
    if (banded && cfg.calibrate_Dc_requested()) {
        const auto cal = calibrate_Dc(cfg, cfg.alpha, 1.0 - cfg.alpha, cfg.calibration_seeds);
        Dc = cal.Dc;
        report.calib_coverage = cal.achieved_coverage;
    }
    if (banded) report.Dc_used = Dc;

    const int reps = cfg.replications;
    for (long n : cfg.n_values) {
        std::vector<ReplicateRow> block(static_cast<std::size_t>(reps));
        parallel_for(reps, cfg.threads, [&](long r) {
            ReplicateRow row;
            row.n = n;
            row.rep = static_cast<int>(r);
            row.seed = derive_seed(cfg.seed, Stream::replicate,
                                   static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(r));
            const auto ds = generate_dataset(f, mu, sigma_d, n, row.seed);
            auto est = fit(ds, fam, cfg.Q);
            row.bw_fallback = est.grid().any_fallback();
            const auto norm = sup_risk(est, f, mu, RiskNormalization::spatial);
            const auto raw = sup_risk(est, f, mu, RiskNormalization::none);
            row.norm_sup = norm.sup;
            row.norm_disc = norm.discretized;
            row.raw_sup = raw.sup;
            row.raw_disc = raw.discretized;
            if (banded) {
                const ConfidenceBand band(std::move(est), cfg.alpha, Dc);
                row.covered = simultaneous_cover(band, f, 10 * band.estimator().grid().M())
                                  ? 1 : 0;
                for (int i = 0; i < 3; ++i) row.hw[i] = band.halfwidth(kProbeX[i]);
            }
            block[static_cast<std::size_t>(r)] = row;
        });

        NSummary s;
        s.n = n;
        std::vector<double> norm_v, raw_v, disc_v;
        long covered = 0, banded_count = 0;
        for (const auto& row : block) {
            norm_v.push_back(row.norm_sup);
            raw_v.push_back(row.raw_sup);
            disc_v.push_back(row.norm_disc);
            if (row.bw_fallback) ++s.fallback_count;
            if (row.covered >= 0) {
                ++banded_count;
                covered += row.covered;
                for (int i = 0; i < 3; ++i) s.mean_hw[i] += row.hw[i];
            }
        }
        s.q10 = quantile(norm_v, 0.10);
        s.q50 = quantile(norm_v, 0.50);
        s.q90 = quantile(norm_v, 0.90);
        s.raw_q50 = quantile(raw_v, 0.50);
        s.disc_q50 = quantile(disc_v, 0.50);
        if (banded_count > 0) {
            s.coverage = static_cast<double>(covered) / static_cast<double>(banded_count);
            for (int i = 0; i < 3; ++i) {
                s.mean_hw[i] /= static_cast<double>(banded_count);
                s.width_ratio[i] =
                    2.0 * s.mean_hw[i] / spatial_rate(n, cfg.s, mu, kProbeX[i]);
            }
            report.beta_used = band_beta(n, cfg.s, cfg.alpha, Dc);
        }
        report.summary.push_back(s);
        report.rows.insert(report.rows.end(), block.begin(), block.end());
    }
    return report;
}

} // namespace detail

/// Monte Carlo distribution of the spatially normalized sup risk.
inline RiskReport mc_risk(const ExperimentConfig& cfg) {
    return detail::run_replicates(cfg, false, "risk");
}

/// Simultaneous coverage of the confidence band (D_c given or calibrated).
inline RiskReport mc_coverage(const ExperimentConfig& cfg) {
    return detail::run_replicates(cfg, true, "coverage");
}

/// Rate check: regress log(median raw sup risk) on log(log n / n).
/// Requires >= 4 distinct n spanning at least two octaves.
inline RiskReport rate_study(const ExperimentConfig& cfg) {
    std::vector<long> ns = cfg.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 4)
        throw std::invalid_argument("rate_study: need >= 4 distinct n values");
    if (static_cast<double>(ns.back()) < 4.0 * static_cast<double>(ns.front()))
        throw std::invalid_argument("rate_study: n values must span >= 2 octaves");

    RiskReport report = detail::run_replicates(cfg, false, "rate");
    std::vector<double> lx, ly;
    for (const auto& s : report.summary) {
        lx.push_back(std::log(std::log(static_cast<double>(s.n)) /
                              static_cast<double>(s.n)));
        ly.push_back(std::log(s.raw_q50));
    }
    const auto m = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    report.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double fit_y = my + report.slope * (lx[i] - mx);
        rss += (ly[i] - fit_y) * (ly[i] - fit_y);
    }
    report.slope_se = std::sqrt(rss / (m - 2.0) / sxx);
    return report;
}

// ---- dataset and figure serialization ----

inline void save_dataset(const Dataset& d, const std::string& path) {
    CsvWriter w(path);
    w.meta("n", static_cast<std::uint64_t>(d.n()));
    w.meta("seed", d.meta().seed);
    w.meta("sigma", d.meta().sigma);
    w.meta("density", d.meta().density_label);
    w.meta("target", d.meta().target_label);
    w.header({"x", "y"});
    for (std::size_t i = 0; i < d.x().size(); ++i) w.row({d.x()[i], d.y()[i]});
}

inline Dataset load_dataset(const std::string& path) {
    const auto t = read_csv(path);
    std::vector<double> x, y;
    for (const auto& row : t.rows) {
        if (row.size() != 2) throw std::runtime_error("dataset row must be x,y: " + path);
        x.push_back(row[0]);
        y.push_back(row[1]);
    }
    DatasetMeta meta;
    for (const auto& line : t.meta_lines) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const auto key = line.substr(2, colon - 2);
        auto value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') value.erase(0, 1);
        if (key == "seed") meta.seed = std::stoull(value);
        else if (key == "sigma") meta.sigma = std::stod(value);
        else if (key == "density") meta.density_label = value;
        else if (key == "target") meta.target_label = value;
    }
    return Dataset(std::move(x), std::move(y), std::move(meta));
}

inline void write_band_csv(const ConfidenceBand& band, const std::string& path,
                           std::size_t points = 512) {
    CsvWriter w(path);
    w.meta("alpha", band.alpha());
    w.meta("Dc", band.Dc());
    w.meta("beta", band.beta());
    w.header({"x", "lower", "center", "upper"});
    for (std::size_t i = 0; i <= points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(points);
        w.row({x, band.lower(x), band.center(x), band.upper(x)});
    }
}

inline void write_curve_csv(const FittedEstimator& est, const std::string& path,
                            std::size_t points = 512) {
    CsvWriter w(path);
    w.meta("n", static_cast<std::uint64_t>(est.n()));
    w.header({"x", "fhat"});
    for (std::size_t i = 0; i <= points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(points);
        w.row({x, est(x)});
    }
}

inline void write_grid_csv(const Grid& g, const std::string& path) {
    CsvWriter w(path);
    w.meta("Delta", g.delta);
    w.meta("tau", g.tau);
    w.meta("HM", g.HM);
    w.header({"j", "x_j", "H_j", "zone", "fallback"});
    for (std::size_t j = 0; j < g.points.size(); ++j)
        w.row({static_cast<double>(j), g.points[j], g.H[j],
               static_cast<double>(static_cast<int>(g.zone[j])),
               g.fallback[j] ? 1.0 : 0.0});
}

inline void write_plot_script(const std::string& path, const std::string& tag) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "#!/usr/bin/env python3\n"
           "# Band over scatter for the '" << tag << "' run.\n"
           "import csv\n"
           "import matplotlib\n"
           "matplotlib.use('Agg')\n"
           "import matplotlib.pyplot as plt\n\n"
           "def load(name):\n"
           "    with open(name) as fh:\n"
           "        rows = [r for r in csv.reader(fh) if r and not r[0].startswith('#')]\n"
           "    head, data = rows[0], rows[1:]\n"
           "    return {h: [float(r[i]) for r in data] for i, h in enumerate(head)}\n\n"
           "data = load('" << tag << "_data.csv')\n"
           "curve = load('" << tag << "_curve.csv')\n"
           "band = load('" << tag << "_band.csv')\n"
           "fig, ax = plt.subplots(figsize=(6.5, 4.0))\n"
           "ax.scatter(data['x'], data['y'], s=6, color='0.6', label='observations')\n"
           "ax.fill_between(band['x'], band['lower'], band['upper'], color='C0',\n"
           "                alpha=0.25, label='confidence band')\n"
           "ax.plot(curve['x'], curve['fhat'], color='C0', label='estimate')\n"
           "ax.set_xlabel('x')\n"
           "ax.set_ylabel('y')\n"
           "ax.legend(loc='best')\n"
           "fig.tight_layout()\n"
           "fig.savefig('" << tag << ".png', dpi=150)\n";
}

/// Reproduce the band illustration: triangle target, n from the config
/// (500 by default), both the uniform and the edge-quadratic designs.
/// Emits data, fitted curve, band CSVs and a plot script per design.
inline void figure_repro(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.outdir);
    const auto f = cfg.target();
    const double sigma_d = cfg.data_sigma(f);
    const KernelFamily fam(cfg.s, cfg.estimator_sigma(f), cfg.L);
    const long n = cfg.n_values.front();

    const std::string labels[2] = {"uniform", "edge-quadratic"};
    const std::string tags[2] = {"uniform", "edgequad"};
    for (int i = 0; i < 2; ++i) {
        const auto mu = design_by_label(labels[i]);
        const auto seed = derive_seed(cfg.seed, Stream::figure, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(i));
        const auto ds = generate_dataset(f, mu, sigma_d, n, seed);
        auto est = fit(ds, fam, cfg.Q);

        double Dc = cfg.Dc;
        if (cfg.calibrate_Dc_requested()) {
            ExperimentConfig ccal = cfg;
            ccal.density = labels[i];
            ccal.n_values = {n};
            Dc = calibrate_Dc(ccal, cfg.alpha, 1.0 - cfg.alpha, cfg.calibration_seeds).Dc;
        }

        const auto base = (fs::path(cfg.outdir) / tags[i]).string();
        save_dataset(ds, base + "_data.csv");
        write_curve_csv(est, base + "_curve.csv");
        const ConfidenceBand band(std::move(est), cfg.alpha, Dc);
        write_band_csv(band, base + "_band.csv");
        write_plot_script(base + "_plot.py", tags[i]);
    }
}

} // namespace supreg
