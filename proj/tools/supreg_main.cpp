// Command line harness: kernel tables, dataset simulation, estimator and
// band evaluation, and the Monte Carlo experiment suite.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "supreg/band.hpp"
#include "supreg/config.hpp"
#include "supreg/csv.hpp"
#include "supreg/estimator.hpp"
#include "supreg/experiments.hpp"
#include "supreg/kernels.hpp"
#include "supreg/lower_bound.hpp"

namespace fs = std::filesystem;
using namespace supreg;

namespace {

std::string default_outdir() {
    if (const char* env = std::getenv("SUPREG_OUTDIR")) return env;
    return ".";
}

struct ConfigArgs {
    std::string config_path;
    std::string outdir = default_outdir();
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;

    ExperimentConfig resolve() const {
        ExperimentConfig cfg =
            config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
        if (seed_set) cfg.seed = seed;
        if (!outdir.empty()) cfg.outdir = outdir;
        if (threads > 0) cfg.threads = threads;
        return cfg;
    }
};

void add_config_options(CLI::App* cmd, ConfigArgs& args, bool config_required = true) {
    auto* opt = cmd->add_option("-c,--config", args.config_path, "experiment config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("-o,--outdir", args.outdir,
                    "output directory (default: $SUPREG_OUTDIR or '.')");
    cmd->add_option("--seed", args.seed, "override the config master seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("-j,--threads", args.threads, "worker pool size");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sup-norm regression with optimal recovery kernels and inhomogeneous bands"};
    app.require_subcommand(1);

    // ---- kernels ----
    double ks = 1.0, ksigma = 1.0, kL = 1.0;
    int kpoints = 401;
    std::string kout = "kernels.csv";
    auto* kernels_cmd = app.add_subcommand("kernels", "tabulate (t, phi_s(t), K_s(t))");
    kernels_cmd->add_option("--s", ks, "smoothness, in (0,1] or 2")->required();
    kernels_cmd->add_option("--sigma", ksigma, "noise level");
    kernels_cmd->add_option("--L", kL, "Hoelder radius");
    kernels_cmd->add_option("--points", kpoints, "table size");
    kernels_cmd->add_option("-o,--out", kout, "output CSV");

    // ---- simulate ----
    ConfigArgs sim_args;
    std::string sim_out = "dataset.csv";
    auto* sim_cmd = app.add_subcommand("simulate", "generate a dataset CSV");
    add_config_options(sim_cmd, sim_args);
    sim_cmd->add_option("--out", sim_out, "dataset file name");

    // ---- fit ----
    ConfigArgs fit_args;
    std::string fit_data, fit_curve = "curve.csv", fit_grid = "grid.csv";
    int fit_points = 512;
    auto* fit_cmd = app.add_subcommand("fit", "fit the estimator to a dataset CSV");
    add_config_options(fit_cmd, fit_args);
    fit_cmd->add_option("-d,--data", fit_data, "dataset CSV")->required();
    fit_cmd->add_option("--eval-points", fit_points, "evaluation grid size");
    fit_cmd->add_option("--curve-out", fit_curve, "fitted curve CSV");
    fit_cmd->add_option("--grid-out", fit_grid, "grid diagnostics CSV");

    // ---- band ----
    ConfigArgs band_args;
    std::string band_data, band_out = "band.csv", band_plot = "band_plot.py";
    auto* band_cmd = app.add_subcommand("band", "confidence band for a dataset CSV");
    add_config_options(band_cmd, band_args);
    band_cmd->add_option("-d,--data", band_data, "dataset CSV")->required();
    band_cmd->add_option("--out", band_out, "band CSV");
    band_cmd->add_option("--plot-out", band_plot, "plot script");

    // ---- risk / coverage / rate / figures ----
    ConfigArgs risk_args, cov_args, rate_args, fig_args;
    std::string risk_prefix = "risk", cov_prefix = "coverage", rate_prefix = "rate";
    auto* risk_cmd = app.add_subcommand("risk", "Monte Carlo sup risk study");
    add_config_options(risk_cmd, risk_args);
    risk_cmd->add_option("--prefix", risk_prefix, "report file prefix");
    auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo band coverage study");
    add_config_options(cov_cmd, cov_args);
    cov_cmd->add_option("--prefix", cov_prefix, "report file prefix");
    auto* rate_cmd = app.add_subcommand("rate", "rate-slope regression over an n ladder");
    add_config_options(rate_cmd, rate_args);
    rate_cmd->add_option("--prefix", rate_prefix, "report file prefix");
    auto* fig_cmd = app.add_subcommand("figures", "reproduce the band illustration runs");
    add_config_options(fig_cmd, fig_args);

    // ---- lowerbound ----
    ConfigArgs lb_args;
    double lb_lo = 0.0, lb_hi = 1.0, lb_eps = 0.5;
    int lb_members = 5, lb_curve_points = 1024;
    auto* lb_cmd = app.add_subcommand("lowerbound", "hardest cubical subfamily fixtures");
    add_config_options(lb_cmd, lb_args);
    lb_cmd->add_option("--a", lb_lo, "interval left end");
    lb_cmd->add_option("--b", lb_hi, "interval right end");
    lb_cmd->add_option("--eps", lb_eps, "vertex magnitude 1 - eps");
    lb_cmd->add_option("--members", lb_members, "sampled member curves");
    lb_cmd->add_option("--curve-points", lb_curve_points, "points per member curve");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kernels_cmd->parsed()) {
            const KernelFamily fam(ks, ksigma, kL);
            fs::create_directories(fs::path(kout).parent_path().empty()
                                       ? "."
                                       : fs::path(kout).parent_path().string());
            CsvWriter w(kout);
            w.meta("s", fam.s());
            w.meta("sigma", fam.sigma());
            w.meta("L", fam.holder_radius());
            w.meta("support", fam.support());
            w.meta("phi0", fam.phi0());
            w.meta("c", fam.c());
            w.meta("P", fam.sharp_constant());
            w.header({"t", "phi", "K"});
            const double T = fam.support();
            for (int i = 0; i < kpoints; ++i) {
                const double t = -T + 2.0 * T * static_cast<double>(i) /
                                          static_cast<double>(kpoints - 1);
                w.row({t, fam.phi(t), fam.kernel(t)});
            }
            return 0;
        }

        if (sim_cmd->parsed()) {
            const auto cfg = sim_args.resolve();
            const auto f = cfg.target();
            const auto ds = generate_dataset(f, cfg.design(), cfg.data_sigma(f),
                                             cfg.n_values.front(), cfg.seed);
            fs::create_directories(cfg.outdir);
            save_dataset(ds, (fs::path(cfg.outdir) / sim_out).string());
            return 0;
        }

        if (fit_cmd->parsed()) {
            const auto cfg = fit_args.resolve();
            const auto f = cfg.target();
            const auto ds = load_dataset(fit_data);
            const KernelFamily fam(cfg.s, cfg.estimator_sigma(f), cfg.L);
            const auto est = fit(ds, fam, cfg.Q);
            fs::create_directories(cfg.outdir);
            write_curve_csv(est, (fs::path(cfg.outdir) / fit_curve).string(),
                            static_cast<std::size_t>(fit_points));
            write_grid_csv(est.grid(), (fs::path(cfg.outdir) / fit_grid).string());
            return 0;
        }

        if (band_cmd->parsed()) {
            const auto cfg = band_args.resolve();
            const auto f = cfg.target();
            const auto ds = load_dataset(band_data);
            const KernelFamily fam(cfg.s, cfg.estimator_sigma(f), cfg.L);
            auto est = fit(ds, fam, cfg.Q);
            double Dc = cfg.Dc;
            if (cfg.calibrate_Dc_requested()) {
                ExperimentConfig ccal = cfg;
                ccal.n_values = {ds.n()};
                Dc = calibrate_Dc(ccal, cfg.alpha, 1.0 - cfg.alpha, cfg.calibration_seeds).Dc;
            }
            const ConfidenceBand band(std::move(est), cfg.alpha, Dc);
            fs::create_directories(cfg.outdir);
            write_band_csv(band, (fs::path(cfg.outdir) / band_out).string());
            write_plot_script((fs::path(cfg.outdir) / band_plot).string(),
                              fs::path(band_out).stem().string());
            return 0;
        }

        if (risk_cmd->parsed()) {
            const auto cfg = risk_args.resolve();
            mc_risk(cfg).write(cfg.outdir, risk_prefix);
            return 0;
        }
        if (cov_cmd->parsed()) {
            const auto cfg = cov_args.resolve();
            mc_coverage(cfg).write(cfg.outdir, cov_prefix);
            return 0;
        }
        if (rate_cmd->parsed()) {
            const auto cfg = rate_args.resolve();
            rate_study(cfg).write(cfg.outdir, rate_prefix);
            return 0;
        }
        if (fig_cmd->parsed()) {
            figure_repro(fig_args.resolve());
            return 0;
        }

        if (lb_cmd->parsed()) {
            const auto cfg = lb_args.resolve();
            const auto f = cfg.target();
            const KernelFamily fam(cfg.s, cfg.estimator_sigma(f), cfg.L);
            const auto family = build_family(fam, cfg.design(), cfg.n_values.front(),
                                             make_interval(lb_lo, lb_hi), lb_eps);
            fs::create_directories(cfg.outdir);

            CsvWriter meta((fs::path(cfg.outdir) / "lowerbound_family.csv").string());
            meta.meta("n", static_cast<std::uint64_t>(cfg.n_values.front()));
            meta.meta("Xi", family.xi);
            meta.meta("h_sup", family.h_sup);
            meta.meta("eps", family.eps);
            meta.meta("bumps", static_cast<std::uint64_t>(family.M));
            meta.header({"j", "center", "h_j", "support_lo", "support_hi", "peak"});
            for (int j = 0; j < family.M; ++j) {
                const auto sup = family.bump_support(j);
                meta.row({static_cast<double>(j + 1), family.centers[static_cast<std::size_t>(j)],
                          family.h[static_cast<std::size_t>(j)], sup.lo, sup.hi,
                          family.peak_value(j)});
            }

            Rng rng(derive_seed(cfg.seed, Stream::membership));
            CsvWriter curves((fs::path(cfg.outdir) / "lowerbound_members.csv").string());
            curves.header({"member", "x", "f"});
            for (int m = 0; m < lb_members; ++m) {
                const auto member = family.member(family.random_vertex(rng));
                for (int i = 0; i <= lb_curve_points; ++i) {
                    const double x = static_cast<double>(i) / lb_curve_points;
                    curves.row({static_cast<double>(m), x, member(x)});
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
