#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "supreg/density.hpp"
#include "supreg/target.hpp"

namespace supreg {

/// Experiment description. Data noise is `sigma` or, alternatively,
/// `root_snr` (sigma = ||f||_2 / root_snr). The estimator is tuned with
/// `sigma_est` (> 0 required by the kernel family); it defaults to the
/// data sigma when that is positive and to 1 otherwise, which keeps
/// zero-noise runs well defined.
struct ExperimentConfig {
    std::string target_label = "triangle";
    double s = 1.0;
    double L = 1.0;
    double Q = 1.0;
    std::string density = "uniform";
    std::vector<long> n_values{1000};
    double sigma = -1.0;    // data noise; unset when < 0
    double root_snr = -1.0; // alternative noise spec; unset when < 0
    double sigma_est = -1.0;
    double alpha = 0.05;
    double Dc = -1.0; // calibrated when < 0
    int calibration_seeds = 150;
    int replications = 1;
    std::uint64_t seed = 1;
    std::string outdir = ".";
    int threads = 1;

    bool calibrate_Dc_requested() const { return Dc <= 0.0; }

    TargetFunction target() const {
        auto f = target_by_label(target_label);
        f.s = s;
        f.L = L;
        f.Q = Q;
        return f;
    }

    DesignDensity design() const { return design_by_label(density); }

    /// Resolve the data noise level; root-SNR is interpreted as
    /// ||f||_{L2[0,1]} / sigma, so sigma = ||f||_2 / root_snr.
    double data_sigma(const TargetFunction& f) const {
        if (sigma >= 0.0) return sigma;
        if (root_snr > 0.0) return f.l2_norm() / root_snr;
        throw std::invalid_argument("config: set either sigma or root_snr");
    }

    double estimator_sigma(const TargetFunction& f) const {
        if (sigma_est > 0.0) return sigma_est;
        const double sd = data_sigma(f);
        return sd > 0.0 ? sd : 1.0;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig c;
        if (j.contains("target")) {
            const auto& t = j.at("target");
            c.target_label = t.value("label", c.target_label);
            c.s = t.value("s", c.s);
            c.L = t.value("L", c.L);
            c.Q = t.value("Q", c.Q);
        }
        c.density = j.value("density", c.density);
        if (j.contains("n")) {
            if (j.at("n").is_array())
                c.n_values = j.at("n").get<std::vector<long>>();
            else
                c.n_values = {j.at("n").get<long>()};
        }
        c.sigma = j.value("sigma", c.sigma);
        c.root_snr = j.value("root_snr", c.root_snr);
        c.sigma_est = j.value("sigma_est", c.sigma_est);
        c.alpha = j.value("alpha", c.alpha);
        if (j.contains("Dc")) {
            if (j.at("Dc").is_string()) {
                if (j.at("Dc").get<std::string>() != "calibrate")
                    throw std::invalid_argument("config: Dc must be a number or \"calibrate\"");
                c.Dc = -1.0;
            } else {
                c.Dc = j.at("Dc").get<double>();
            }
        }
        c.calibration_seeds = j.value("calibration_seeds", c.calibration_seeds);
        c.replications = j.value("replications", c.replications);
        c.seed = j.value("seed", c.seed);
        c.outdir = j.value("outdir", c.outdir);
        c.threads = j.value("threads", c.threads);
        c.validate();
        return c;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["target"] = {{"label", target_label}, {"s", s}, {"L", L}, {"Q", Q}};
        j["density"] = density;
        j["n"] = n_values;
        if (sigma >= 0.0) j["sigma"] = sigma;
        if (root_snr > 0.0) j["root_snr"] = root_snr;
        if (sigma_est > 0.0) j["sigma_est"] = sigma_est;
        j["alpha"] = alpha;
        if (Dc > 0.0) j["Dc"] = Dc;
        else j["Dc"] = "calibrate";
        j["calibration_seeds"] = calibration_seeds;
        j["replications"] = replications;
        j["seed"] = seed;
        return j;
    }

    /// FNV-1a over the canonical serialized form (keys sorted by the json
    /// object ordering); embedded in every report for provenance.
    std::uint64_t hash() const {
        const std::string dump = to_json().dump();
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : dump) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    void validate() const {
        if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
        for (long n : n_values)
            if (n < 8) throw std::invalid_argument("config: every n must be >= 8");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("config: alpha must lie in (0,1)");
    }
};

} // namespace supreg
