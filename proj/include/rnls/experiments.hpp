#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rnls/config.hpp"
#include "rnls/field.hpp"
#include "rnls/fit.hpp"
#include "rnls/profile.hpp"

namespace rnls {

inline constexpr const char* version_stamp = "rnls 1.0.0";

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
    nlohmann::json to_json() const;
};

struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json columns = nlohmann::json::object();      // file -> column -> description
    nlohmann::json diagnostics = nlohmann::json::object();
    nlohmann::json norms = nlohmann::json::object();        // per-snapshot norms
    nlohmann::json fits = nlohmann::json::object();
    std::vector<std::string> files;                         // relative to the output directory
    std::vector<std::string> warnings;
    std::vector<CheckResult> checks;
    bool passed() const;
    nlohmann::json to_json() const;
};

// Writes manifest.json into dir (created if needed). The timestamp is the only
// field that differs between identical runs.
void write_manifest(const RunManifest& m, const std::string& dir);

// u0 = A exp(-x^2 / (2 sigma^2)) g(y) at t0, with g = sum_{|k|_inf <= band} <k>^{-(s+2)} e^{i theta_k} e^{i k.y},
// theta_k uniform from the seed, and A chosen so that ||x u0||_{L^2} + ||<D_y>^s u0||_{L^2} = eps.
ProductField initial_data(const SimConfig& cfg);

// log-spaced record times in [t0, t1], rounded to whole steps and deduplicated.
std::vector<std::size_t> record_steps(const SimConfig& cfg);

struct Trajectory {
    std::vector<double> t, mass, energy, xplus, y, linf_h1, linf_ha, boundary;
    std::vector<ProductField> states;  // filled when requested
};

// Evolves the initial data of cfg and samples the norm trajectory at record_steps(cfg).
Trajectory simulate(const SimConfig& cfg, bool keep_states);

struct AsymptoticComparison {
    ScatteringReport report;
    std::vector<double> resonant_gap;  // ||W_ip - G|| at report.times
};

// W matched to gamma(t1) and evolved backward by step_asymptotic; G (the interaction-picture
// resonant solution from the same data) evolved backward by step_resonant.
AsymptoticComparison compare_asymptotics(const SimConfig& cfg, const Trajectory& tr);

struct CompletenessRun {
    std::vector<double> T_max;
    std::vector<double> mismatch;    // ||u^(T_max)(T_min) - u^(T_ref)(T_min)||_L2
    std::vector<double> round_trip;  // ||forward NLS(u^(T_max)(T_min)) at T_max - u_app(T_max)||_L2
    std::vector<double> correction;  // ||w~(T_min)||_L2
    std::vector<int> iterations;
    double profile_l2 = 0.0;
};

// Single-mode profile of amplitude eps; solves the backward problem for every T_max and T_ref.
CompletenessRun completeness_experiment(const SimConfig& cfg);

struct ResonantRun {
    std::vector<double> tau, l2_drift, h1_drift;  // max over v of relative drifts
    double worst_l2 = 0.0, worst_h1 = 0.0;
    ProfileField final_state;
};

// Random small data of size eps per velocity on LineGrid(L, nx), evolved by step_resonant from
// t0 to t1 in log-time steps of at most tau_dt.
ResonantRun resonant_experiment(const SimConfig& cfg);

RunManifest cmd_simulate(const SimConfig& cfg);
RunManifest cmd_compare_asymptotics(const SimConfig& cfg);
RunManifest cmd_resonant(const SimConfig& cfg);
RunManifest cmd_complete(const SimConfig& cfg);

// Writes a CSV table with a header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// gnuplot script plotting the given y columns of a CSV file against column 1 on log-log axes.
void write_gnuplot(const std::string& path, const std::string& csv, const std::vector<std::string>& header,
                   const std::vector<std::size_t>& y_columns, const std::string& title);

}  // namespace rnls
