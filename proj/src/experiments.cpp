#include "rnls/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "rnls/completeness.hpp"
#include "rnls/evolution.hpp"
#include "rnls/resonance.hpp"
#include "rnls/snapshot.hpp"
#include "rnls/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rnls {

json CheckResult::to_json() const {
    return {{"name", name}, {"pass", pass}, {"value", value}, {"threshold", threshold}, {"detail", detail}};
}

bool RunManifest::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json RunManifest::to_json() const {
    json j;
    j["command"] = command;
    j["version"] = version_stamp;
    j["config"] = config;
    j["columns"] = columns;
    j["diagnostics"] = diagnostics;
    j["norms"] = norms;
    j["fits"] = fits;
    j["files"] = files;
    j["warnings"] = warnings;
    j["checks"] = json::array();
    for (const CheckResult& c : checks) j["checks"].push_back(c.to_json());
    j["passed"] = passed();
    return j;
}

void write_manifest(const RunManifest& m, const std::string& dir) {
    fs::create_directories(dir);
    json j = m.to_json();
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    j["timestamp"] = ts.str();
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw FormatError("cannot write manifest in " + dir);
    out << j.dump(2) << '\n';
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ShapeError("CSV header and column count differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ShapeError("CSV columns differ in length");
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", columns[i][r]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_gnuplot(const std::string& path, const std::string& csv, const std::vector<std::string>& header,
                   const std::vector<std::size_t>& y_columns, const std::string& title) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << "# gnuplot " << fs::path(path).filename().string() << "\n"
        << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set grid\n"
        << "set xlabel '" << header.front() << "'\n"
        << "set title '" << title << "'\n"
        << "set key left bottom\n"
        << "plot ";
    for (std::size_t i = 0; i < y_columns.size(); ++i) {
        const std::size_t c = y_columns[i];
        out << (i ? ", \\\n     " : "") << "'" << csv << "' using 1:" << c + 1 << " skip 1 with linespoints title '"
            << header[c] << "'";
    }
    out << '\n';
}

namespace {

// Marks an output directory as in use for the lifetime of the object.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::string& dir) : path_(fs::path(dir) / ".rnls.lock") {
        fs::create_directories(dir);
        if (fs::exists(path_)) throw ConfigError("output directory " + dir + " is locked by another run");
        std::ofstream(path_) << "locked\n";
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    fs::path path_;
};

TorusSpectrum spectrum_of(const SimConfig& cfg) { return TorusSpectrum(cfg.d, cfg.K); }

NormParams params_of(const SimConfig& cfg) { return {cfg.alpha_value(), cfg.s_value()}; }

StepOptions options_of(const SimConfig& cfg) {
    StepOptions o;
    o.sign = cfg.sign;
    return o;
}

bool inside_band(const TorusSpectrum& sp, std::size_t m, int band) {
    const auto& k = sp.mode(m);
    for (int i = 0; i < sp.dimension(); ++i)
        if (std::abs(k[i]) > band) return false;
    return true;
}

// <k>^{-(s+2)} e^{i theta_k} on |k|_inf <= band.
TorusColumn torus_factor(const TorusSpectrum& sp, int band, double s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    TorusColumn c(sp.mode_count());
    for (std::size_t m = 0; m < sp.mode_count(); ++m) {
        const double th = phase(rng);
        if (inside_band(sp, m, band)) c[m] = std::pow(sp.bracket(m), -(s + 2.0)) * std::polar(1.0, th);
    }
    return c;
}

double relative_drift(const std::vector<double>& v) {
    if (v.empty() || v.front() == 0.0) return 0.0;
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - v.front()));
    return d / std::abs(v.front());
}

json fit_json(const PowerFit& f) {
    return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"residual", f.residual},
            {"t_lo", f.t_lo},         {"t_hi", f.t_hi},           {"samples", f.samples}};
}

bool fittable(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= lo && t[i] <= hi && v[i] > 0.0) ++n;
    return n >= 3;
}

std::string fmt(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

// Profile field of the resonant/asymptotic systems at the focusing sign is the conjugate of
// the defocusing evolution of the conjugate data.
ProfileField conjugated(ProfileField f) {
    for (auto& z : f.data()) z = std::conj(z);
    return f;
}

}  // namespace

ProductField initial_data(const SimConfig& cfg) {
    cfg.validate();
    const TorusSpectrum sp = spectrum_of(cfg);
    const LineGrid grid(cfg.L, cfg.nx);
    ProductField u(grid, sp, cfg.t0);
    if (cfg.eps == 0.0) return u;
    std::mt19937_64 rng(cfg.seed);
    const TorusColumn g = torus_factor(sp, cfg.data_band(), cfg.s_value(), rng);
    for (std::size_t j = 0; j < grid.count(); ++j) {
        const double x = grid.point(j);
        const double e = std::exp(-x * x / (2.0 * cfg.sigma * cfg.sigma));
        for (std::size_t m = 0; m < sp.mode_count(); ++m) u(j, m) = e * g[m];
    }
    const double a = norm(multiply_coordinate(u), NormKind::L2) +
                     norm(frac_derivative(u, cfg.s_value(), Axis::y, false), NormKind::L2);
    u *= cfg.eps / a;
    return u;
}

std::vector<std::size_t> record_steps(const SimConfig& cfg) {
    cfg.validate();
    const auto total = static_cast<std::size_t>(std::llround((cfg.t1 - cfg.t0) / cfg.dt));
    std::vector<std::size_t> n{0};
    const std::size_t R = std::max<std::size_t>(cfg.records, 2);
    const double a = cfg.t0 > 0.0 ? cfg.t0 : cfg.dt;
    for (std::size_t i = 0; i < R; ++i) {
        const double t = a * std::pow(cfg.t1 / a, static_cast<double>(i) / static_cast<double>(R - 1));
        n.push_back(static_cast<std::size_t>(std::llround(std::max(0.0, t - cfg.t0) / cfg.dt)));
    }
    n.push_back(total);
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    while (!n.empty() && n.back() > total) n.pop_back();
    return n;
}

Trajectory simulate(const SimConfig& cfg, bool keep_states) {
    const std::vector<std::size_t> steps = record_steps(cfg);
    const NormParams p = params_of(cfg);
    Trajectory tr;
    auto record = [&](const ProductField& u) {
        tr.t.push_back(u.time());
        tr.mass.push_back(mass(u));
        tr.energy.push_back(energy(u, cfg.sign));
        tr.xplus.push_back(norm(u, NormKind::Xplus, p));
        tr.y.push_back(norm(u, NormKind::Y, p));
        tr.linf_h1.push_back(linf_h_alpha(u, 1.0));
        tr.linf_ha.push_back(linf_h_alpha(u, p.alpha));
        tr.boundary.push_back(boundary_mass_fraction(u));
        if (keep_states) tr.states.push_back(u);
    };
    ProductField u = initial_data(cfg);
    record(u);
    std::size_t next = 1;
    StepOptions opt = options_of(cfg);
    evolve_nls(
        u, cfg.dt, steps.back(),
        [&](std::size_t n, const ProductField& v) {
            if (next < steps.size() && n == steps[next]) {
                ProductField x = v;
                x.set_time(cfg.t0 + static_cast<double>(n) * cfg.dt);
                record(x);
                ++next;
            }
            return true;
        },
        opt);
    return tr;
}

AsymptoticComparison compare_asymptotics(const SimConfig& cfg, const Trajectory& tr) {
    if (tr.states.size() != tr.t.size() || tr.states.empty())
        throw DomainError("asymptotic comparison needs the stored states of the run");
    if (!(cfg.t1 >= 1.0)) throw ConfigError("asymptotic comparison needs t1 >= 1");
    const NormParams p = params_of(cfg);
    const double sg = cfg.sign;
    auto table = ResonanceTable::build(cfg.d, cfg.K, TableScope::resonant);

    const std::size_t last = tr.states.size() - 1;
    ProfileField W = extract_gamma(extract_w(tr.states[last]));
    ProfileField G = interaction_picture(W);
    if (sg < 0) G = conjugated(G);
    StepOptions opt = options_of(cfg);

    AsymptoticComparison out;
    std::vector<double> t, el2, ela, gap;
    std::vector<std::size_t> idx;
    for (std::size_t i = last + 1; i-- > 0;) {
        const double ti = tr.t[i];
        if (ti < 1.0) break;
        // W backward to t_i in steps of dt, G backward in log-time steps of at most tau_dt
        const double t_from = W.time();
        const auto n = static_cast<std::size_t>(std::llround((t_from - ti) / cfg.dt));
        for (std::size_t q = 1; q <= n; ++q) {
            opt.step_index = q;
            W = step_asymptotic(W, -cfg.dt, opt);
            W.set_time(t_from - static_cast<double>(q) * cfg.dt);
        }
        W.set_time(ti);
        const double dtau = std::log(ti / G.time());
        if (dtau != 0.0) {
            const auto m = static_cast<std::size_t>(std::ceil(std::abs(dtau) / cfg.tau_dt - 1e-9));
            const double h = dtau / static_cast<double>(m);
            for (std::size_t q = 0; q < m; ++q) G = step_resonant(G, h, *table);
        }
        G.set_time(ti);
        const LineGrid vg(tr.states[i].grid().half_width() / ti, tr.states[i].points());
        const ScatteringError e = scattering_error(tr.states[i], resample_profile(W, vg), p.alpha);
        ProfileField Gs = sg < 0 ? conjugated(G) : G;
        t.push_back(ti);
        el2.push_back(e.l2);
        ela.push_back(e.linf_h_alpha);
        gap.push_back(norm(interaction_picture(W) - Gs, NormKind::L2));
        idx.push_back(i);
    }
    std::reverse(t.begin(), t.end());
    std::reverse(el2.begin(), el2.end());
    std::reverse(ela.begin(), ela.end());
    std::reverse(gap.begin(), gap.end());
    std::reverse(idx.begin(), idx.end());

    ScatteringReport& r = out.report;
    r.times = t;
    r.err_l2 = el2;
    r.err_linf_h_alpha = ela;
    for (std::size_t i : idx) {
        r.norms["mass"].push_back(tr.mass[i]);
        r.norms["Xplus"].push_back(tr.xplus[i]);
        r.norms["Y"].push_back(tr.y[i]);
        r.norms["LinfxH1y"].push_back(tr.linf_h1[i]);
    }
    const double lo = cfg.fit_low(), hi = cfg.fit_high();
    if (fittable(t, el2, lo, hi)) r.fits["err_L2"] = fit_power_law(t, el2, lo, hi);
    if (fittable(t, ela, lo, hi)) r.fits["err_LinfHa"] = fit_power_law(t, ela, lo, hi);
    if (fittable(t, r.norms["LinfxH1y"], lo, hi))
        r.fits["LinfxH1y"] = fit_power_law(t, r.norms["LinfxH1y"], lo, hi);
    out.resonant_gap = gap;
    return out;
}

CompletenessRun completeness_experiment(const SimConfig& cfg) {
    cfg.validate();
    const TorusSpectrum sp = spectrum_of(cfg);
    TorusSpectrum::Mode k0{0, 0, 0, 0};
    for (std::size_t i = 0; i < cfg.profile_mode.size() && i < 4; ++i) k0[i] = cfg.profile_mode[i];
    const SingleModeProfile W(sp, k0, cplx(cfg.eps, 0.0), cfg.profile_sigma, 0.0, cfg.T_min, cfg.sign);
    const LineGrid xg(cfg.L, cfg.nx);

    CompletenessRun run;
    run.profile_l2 = norm(W.at(cfg.T_min, LineGrid(cfg.L / cfg.T_min, cfg.nx)), NormKind::L2);
    if (cfg.eps == 0.0) {
        for (double T : cfg.T_max_list) {
            run.T_max.push_back(T);
            run.mismatch.push_back(0.0);
            run.round_trip.push_back(0.0);
            run.correction.push_back(0.0);
            run.iterations.push_back(0);
        }
        return run;
    }
    auto solve = [&](double T) {
        CompletenessOptions o;
        o.T_min = cfg.T_min;
        o.T_max = T;
        o.relative_step = cfg.relative_step;
        o.max_step = cfg.max_step;
        o.iterations = cfg.iterations;
        return solve_backward_completeness(W, xg, o);
    };
    const CompletenessReport ref = solve(cfg.T_ref);
    StepOptions opt = options_of(cfg);
    for (double T : cfg.T_max_list) {
        const CompletenessReport rep = solve(T);
        run.T_max.push_back(T);
        run.mismatch.push_back(norm(rep.u - ref.u, NormKind::L2));
        run.correction.push_back(norm(rep.correction, NormKind::L2));
        run.iterations.push_back(rep.iterations);
        const auto n = static_cast<std::size_t>(std::llround((T - cfg.T_min) / cfg.forward_dt));
        ProductField u = evolve_nls(rep.u, (T - cfg.T_min) / static_cast<double>(n), n, {}, opt);
        u.set_time(T);
        const ProductField ua = build_u_app(W.at(T, LineGrid(cfg.L / T, cfg.nx)), T);
        run.round_trip.push_back(norm(u - ua, NormKind::L2));
    }
    return run;
}

RunManifest cmd_simulate(const SimConfig& cfg) {
    cfg.validate();
    DirectoryLock lock(cfg.out);
    RunManifest m;
    m.command = "simulate";
    m.config = cfg.to_json();
    const Trajectory tr = simulate(cfg, cfg.snapshot_every > 0);

    const std::vector<std::string> head{"t", "mass", "energy", "Xplus", "Y", "LinfxH1y", "LinfxHay", "boundary"};
    write_csv((fs::path(cfg.out) / "trajectory.csv").string(), head,
              {tr.t, tr.mass, tr.energy, tr.xplus, tr.y, tr.linf_h1, tr.linf_ha, tr.boundary});
    write_gnuplot((fs::path(cfg.out) / "trajectory.gp").string(), "trajectory.csv", head, {3, 5, 6},
                  "norm trajectory");
    m.files = {"trajectory.csv", "trajectory.gp"};
    const std::string alpha = fmt(cfg.alpha_value()), s = fmt(cfg.s_value());
    m.columns["trajectory.csv"] = {
        {"t", "time"},
        {"mass", "dx (2pi)^d sum |u|^2 (line quadrature, torus Fourier-series coefficients)"},
        {"energy", "1/2 int |d_x u|^2 + |grad_y u|^2 + sign int |u|^4 / 2"},
        {"Xplus", "(||L_x u||^2 + ||<D_y>^s u||^2)^{1/2}, L_x = x + i t d_x, s = " + s},
        {"Y", "||u||_{L^inf_x H^alpha_y} + ||u||_{L^2}, alpha = " + alpha},
        {"LinfxH1y", "max_x (2pi)^{d/2} (sum_k <k>^2 |u_k(x)|^2)^{1/2}"},
        {"LinfxHay", "max_x (2pi)^{d/2} (sum_k <k>^{2 alpha} |u_k(x)|^2)^{1/2}, alpha = " + alpha},
        {"boundary", "mass in the outer 10% of the x box divided by the total mass"}};
    m.norms = {{"t", tr.t},         {"mass", tr.mass}, {"energy", tr.energy}, {"Xplus", tr.xplus},
               {"Y", tr.y},         {"LinfxH1y", tr.linf_h1}, {"LinfxHay", tr.linf_ha},
               {"boundary", tr.boundary}};
    if (cfg.snapshot_every > 0) {
        fs::create_directories(fs::path(cfg.out) / "snapshots");
        json snaps = json::array();
        for (std::size_t i = 0; i < tr.states.size(); i += cfg.snapshot_every) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshots/u_%04zu.rnls", i);
            write_snapshot((fs::path(cfg.out) / name).string(), tr.states[i]);
            m.files.push_back(name);
            m.files.push_back(fs::path(sidecar_path(name)).string());
            snaps.push_back({{"file", name}, {"t", tr.t[i]}, {"mass", tr.mass[i]}, {"Xplus", tr.xplus[i]},
                             {"LinfxH1y", tr.linf_h1[i]}});
        }
        m.diagnostics["snapshots"] = snaps;
    }

    const double drift = relative_drift(tr.mass);
    m.checks.push_back({"mass drift", drift <= 1e-12, drift, 1e-12, "max_t |M(t) - M(t0)| / M(t0)"});

    const double lo = cfg.fit_low(), hi = cfg.fit_high();
    if (fittable(tr.t, tr.linf_h1, lo, hi)) {
        const PowerFit f = fit_power_law(tr.t, tr.linf_h1, lo, hi);
        m.fits["LinfxH1y"] = fit_json(f);
        const bool ok = f.exponent >= -0.6 && f.exponent <= -0.4 && f.residual <= 0.05;
        m.checks.push_back({"decay exponent", ok, f.exponent, -0.4,
                            "L^inf_x H^1_y fit over [" + fmt(lo) + ", " + fmt(hi) + "] in [-0.6, -0.4], residual " +
                                fmt(f.residual) + " <= 0.05"});
    } else {
        m.checks.push_back({"decay exponent", true, 0.0, -0.4, "not applicable: no positive samples in the fit window"});
    }

    double growth = 0.0;
    if (!tr.xplus.empty() && tr.xplus.front() > 0.0)
        for (std::size_t i = 0; i < tr.t.size(); ++i)
            growth = std::max(growth, tr.xplus[i] / tr.xplus.front() / std::pow(1.0 + tr.t[i], 0.1));
    m.checks.push_back({"Xplus growth", growth <= 1.0, growth, 1.0, "max_t X+(t) / (X+(t0) (1 + t)^0.1)"});

    const double edge = *std::max_element(tr.boundary.begin(), tr.boundary.end());
    if (edge > 1e-8) m.warnings.push_back("boundary mass fraction reached " + fmt(edge) + " (> 1e-8)");
    m.checks.push_back({"boundary mass", edge <= 1e-6, edge, 1e-6,
                        "outer-10% mass fraction; above 1e-8 is a warning, above 1e-6 a failure"});
    write_manifest(m, cfg.out);
    return m;
}

namespace {

json report_json(const ScatteringReport& r, const std::vector<double>& gap) {
    json j;
    j["times"] = r.times;
    j["err_L2"] = r.err_l2;
    j["err_LinfHa"] = r.err_linf_h_alpha;
    j["resonant_gap"] = gap;
    j["norms"] = r.norms;
    j["fits"] = json::object();
    for (const auto& [k, f] : r.fits) j["fits"][k] = fit_json(f);
    return j;
}

}  // namespace

RunManifest cmd_compare_asymptotics(const SimConfig& cfg) {
    cfg.validate();
    DirectoryLock lock(cfg.out);
    RunManifest m;
    m.command = "compare";
    m.config = cfg.to_json();
    const Trajectory tr = simulate(cfg, true);
    const AsymptoticComparison c = compare_asymptotics(cfg, tr);
    const ScatteringReport& r = c.report;
    const fs::path dir(cfg.out);
    {
        std::ofstream js(dir / "scattering.json");
        js << report_json(r, c.resonant_gap).dump(2) << '\n';
    }
    const std::vector<std::string> head{"t", "err_L2", "err_LinfHa", "resonant_gap", "mass", "Xplus", "Y", "LinfxH1y"};
    auto col = [&](const char* k) {
        auto it = r.norms.find(k);
        return it == r.norms.end() ? std::vector<double>(r.times.size(), 0.0) : it->second;
    };
    write_csv((dir / "scattering.csv").string(), head,
              {r.times, r.err_l2, r.err_linf_h_alpha, c.resonant_gap, col("mass"), col("Xplus"), col("Y"),
               col("LinfxH1y")});
    write_gnuplot((dir / "scattering.gp").string(), "scattering.csv", head, {1, 2, 3}, "profile errors");
    m.files = {"scattering.json", "scattering.csv", "scattering.gp"};
    const std::string alpha = fmt(cfg.alpha_value());
    m.columns["scattering.csv"] = {
        {"t", "time (record times with t >= 1)"},
        {"err_L2", "||u(t) - t^{-1/2} e^{i x^2/2t} W(t, x/t)||_{L^2}, W matched to gamma(t1)"},
        {"err_LinfHa", "same difference in L^inf_x H^alpha_y, alpha = " + alpha},
        {"resonant_gap", "||e^{-i t Delta_y/2} W(t) - G(t)||_{L^2_{v,y}}, G the resonant-system solution"},
        {"mass", "dx (2pi)^d sum |u|^2"},
        {"Xplus", "(||L_x u||^2 + ||<D_y>^s u||^2)^{1/2}"},
        {"Y", "||u||_{L^inf_x H^alpha_y} + ||u||_{L^2}"},
        {"LinfxH1y", "max_x per-point H^1_y norm"}};
    m.norms = report_json(r, c.resonant_gap)["norms"];
    m.norms["t"] = r.times;
    for (const auto& [k, f] : r.fits) m.fits[k] = fit_json(f);

    auto check_fit = [&](const char* key, const char* name, double bound) {
        auto it = r.fits.find(key);
        if (it == r.fits.end()) {
            m.checks.push_back({name, true, 0.0, bound, "not applicable: no positive samples in the fit window"});
            return;
        }
        m.checks.push_back({name, it->second.exponent <= bound, it->second.exponent, bound,
                            "fitted exponent over [" + fmt(it->second.t_lo) + ", " + fmt(it->second.t_hi) +
                                "], residual " + fmt(it->second.residual)});
    };
    check_fit("err_L2", "L2 profile error exponent", -0.4);
    check_fit("err_LinfHa", "LinfHa profile error exponent", -0.5);
    write_manifest(m, cfg.out);
    return m;
}

ResonantRun resonant_experiment(const SimConfig& cfg) {
    cfg.validate();
    if (!(cfg.t0 > 0.0)) throw ConfigError("the resonant system starts at t0 > 0");
    auto table = ResonanceTable::build(cfg.d, cfg.K, TableScope::resonant);
    const TorusSpectrum& sp = table->spectrum();
    const LineGrid vg(cfg.L, cfg.nx);
    ProfileField G(vg, sp, cfg.t0);
    std::mt19937_64 rng(cfg.seed);
    const TorusColumn base = torus_factor(sp, cfg.data_band(), cfg.s_value(), rng);
    double l2 = 0.0;
    for (const cplx& z : base) l2 += std::norm(z);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < vg.count(); ++j) {
        const double v = vg.point(j);
        const double e = cfg.eps * std::exp(-v * v / (2.0 * cfg.sigma * cfg.sigma)) / std::sqrt(l2);
        for (std::size_t k = 0; k < sp.mode_count(); ++k) G(j, k) = e * base[k] * std::polar(1.0, phase(rng));
    }
    if (cfg.sign < 0) G = conjugated(G);

    auto sums = [&](const ProfileField& f, std::vector<double>& a, std::vector<double>& b) {
        a.assign(f.points(), 0.0);
        b.assign(f.points(), 0.0);
        for (std::size_t j = 0; j < f.points(); ++j)
            for (std::size_t k = 0; k < f.modes(); ++k) {
                a[j] += std::norm(f(j, k));
                b[j] += static_cast<double>(sp.norm2(k)) * std::norm(f(j, k));
            }
    };
    std::vector<double> a0, b0, a, b;
    sums(G, a0, b0);
    const double total = std::log(cfg.t1 / cfg.t0);
    const auto steps = static_cast<std::size_t>(std::ceil(total / cfg.tau_dt - 1e-9));
    const double h = total / static_cast<double>(steps);
    const std::size_t stride = std::max<std::size_t>(1, steps / std::max<std::size_t>(cfg.records, 1));
    ResonantRun r;
    r.tau = {0.0};
    r.l2_drift = {0.0};
    r.h1_drift = {0.0};
    for (std::size_t n = 1; n <= steps; ++n) {
        G = step_resonant(G, h, *table);
        require_finite(G, "resonant system");
        if (n % stride == 0 || n == steps) {
            sums(G, a, b);
            double x = 0.0, y = 0.0;
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (a0[j] > 0.0) x = std::max(x, std::abs(a[j] - a0[j]) / a0[j]);
                if (b0[j] > 0.0) y = std::max(y, std::abs(b[j] - b0[j]) / b0[j]);
            }
            r.tau.push_back(static_cast<double>(n) * h);
            r.l2_drift.push_back(x);
            r.h1_drift.push_back(y);
            r.worst_l2 = std::max(r.worst_l2, x);
            r.worst_h1 = std::max(r.worst_h1, y);
        }
    }
    r.final_state = cfg.sign < 0 ? conjugated(G) : G;
    return r;
}

RunManifest cmd_resonant(const SimConfig& cfg) {
    cfg.validate();
    if (!(cfg.t0 > 0.0)) throw ConfigError("the resonant system starts at t0 > 0");
    DirectoryLock lock(cfg.out);
    RunManifest m;
    m.command = "resonant";
    m.config = cfg.to_json();
    const ResonantRun r = resonant_experiment(cfg);
    const fs::path dir(cfg.out);
    const std::vector<std::string> head{"tau", "l2_drift", "h1_drift"};
    write_csv((dir / "resonant.csv").string(), head, {r.tau, r.l2_drift, r.h1_drift});
    write_gnuplot((dir / "resonant.gp").string(), "resonant.csv", head, {1, 2}, "resonant-system invariants");
    write_snapshot((dir / "resonant_final.rnls").string(), r.final_state);
    m.files = {"resonant.csv", "resonant.gp", "resonant_final.rnls", "resonant_final.json"};
    m.columns["resonant.csv"] = {
        {"tau", "log time ln(t / t0)"},
        {"l2_drift", "max_v |sum_k |G_k|^2 - initial| / initial"},
        {"h1_drift", "max_v |sum_k |k|^2 |G_k|^2 - initial| / initial"}};
    m.checks.push_back({"resonant l2 invariant", r.worst_l2 <= 1e-9, r.worst_l2, 1e-9, "per-velocity mode sum"});
    m.checks.push_back({"resonant h1 invariant", r.worst_h1 <= 1e-9, r.worst_h1, 1e-9, "per-velocity |k|^2-weighted mode sum"});
    write_manifest(m, cfg.out);
    return m;
}

RunManifest cmd_complete(const SimConfig& cfg) {
    cfg.validate();
    DirectoryLock lock(cfg.out);
    RunManifest m;
    m.command = "complete";
    m.config = cfg.to_json();
    const CompletenessRun run = completeness_experiment(cfg);
    const fs::path dir(cfg.out);
    std::vector<double> iters(run.iterations.begin(), run.iterations.end());
    const std::vector<std::string> head{"T_max", "mismatch", "round_trip", "correction", "iterations"};
    write_csv((dir / "completeness.csv").string(), head, {run.T_max, run.mismatch, run.round_trip, run.correction, iters});
    write_gnuplot((dir / "completeness.gp").string(), "completeness.csv", head, {1, 2, 3}, "backward solve");
    m.files = {"completeness.csv", "completeness.gp"};
    m.columns["completeness.csv"] = {
        {"T_max", "final time of the backward solve"},
        {"mismatch", "||u(T_min) from T_max - u(T_min) from T_ref||_{L^2}, T_ref = " + fmt(cfg.T_ref)},
        {"round_trip", "||forward NLS of u(T_min) to T_max - u_app(T_max)||_{L^2}"},
        {"correction", "||u(T_min) - u_app(T_min)||_{L^2}"},
        {"iterations", "fixed-point iterations used"}};
    m.diagnostics["profile_l2"] = run.profile_l2;
    bool mono = true;
    for (std::size_t i = 1; i < run.mismatch.size(); ++i) mono = mono && run.mismatch[i] < run.mismatch[i - 1];
    if (cfg.eps == 0.0) mono = true;
    const double last = run.mismatch.empty() ? 0.0 : run.mismatch.back();
    const double bound = 10.0 * cfg.eps * cfg.eps * cfg.eps;
    m.checks.push_back({"mismatch decreases with T_max", mono, last, 0.0, "strictly decreasing over the T_max list"});
    m.checks.push_back({"mismatch at T_min", last <= bound, last, bound, "L^2 mismatch at the largest T_max <= 10 eps^3"});
    write_manifest(m, cfg.out);
    return m;
}

}  // namespace rnls
