#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace rnls {

struct SimConfig {
    std::string experiment = "run";
    int d = 1;
    int K = 2;
    double L = 800.0;
    std::size_t nx = 4096;
    double dt = 0.02;
    double tau_dt = 0.01;
    double t0 = 1.0;
    double t1 = 128.0;
    double eps = 0.1;
    double alpha = -1.0;  // negative: d/2 + 0.1
    double s = -1.0;      // negative: 3 alpha
    double sign = 1.0;
    std::uint64_t seed = 1;
    double sigma = 1.0;     // Gaussian width of the initial data in x
    int data_modes = -1;    // torus band of the initial data, negative: K
    std::size_t records = 64;         // diagnostic samples (log spaced)
    std::size_t snapshot_every = 0;   // RNLS snapshot stride in records, 0: none
    double fit_lo = -1.0;   // negative: 4 t0
    double fit_hi = -1.0;   // negative: t1 / 2
    std::string out = "rnls_out";
    std::string suite = "all";

    // asymptotic-completeness run
    double T_min = 1.0;
    std::vector<double> T_max_list{32.0, 64.0, 128.0};
    double T_ref = 256.0;
    double profile_sigma = 1.0;
    std::vector<int> profile_mode{1};
    double relative_step = 0.02;
    double max_step = 1.0;
    int iterations = 30;
    double forward_dt = 0.05;

    double alpha_value() const { return alpha > 0 ? alpha : d / 2.0 + 0.1; }
    double s_value() const { return s > 0 ? s : 3.0 * alpha_value(); }
    int data_band() const { return data_modes >= 0 ? data_modes : K; }
    double fit_low() const { return fit_lo > 0 ? fit_lo : 4.0 * t0; }
    double fit_high() const { return fit_hi > 0 ? fit_hi : t1 / 2.0; }

    // Throws ConfigError when an invariant fails.
    void validate() const;
    nlohmann::json to_json() const;
    static SimConfig from_json(const nlohmann::json& j);
};

// Reads a JSON config file; unknown keys are a configuration error.
SimConfig load_config(const std::string& path);

}  // namespace rnls
