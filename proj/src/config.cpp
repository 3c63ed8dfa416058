#include "rnls/config.hpp"

#include <fstream>

#include "rnls/errors.hpp"

namespace rnls {

void SimConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (d < 1 || d > 4) fail("d must be in 1..4");
    if (K < 0) fail("K must be nonnegative");
    if (!(L > 0)) fail("box half width must be positive");
    if (nx < 2 || nx % 2) fail("nx must be even and >= 2");
    if (!(dt > 0)) fail("dt must be positive");
    if (!(tau_dt > 0)) fail("tau_dt must be positive");
    if (!(t0 >= 0)) fail("t0 must be nonnegative");
    if (!(t1 > t0)) fail("t1 must exceed t0");
    if (!(eps >= 0)) fail("eps must be nonnegative");
    if (!(alpha_value() > d / 2.0)) fail("alpha must exceed d/2");
    if (sign != 1.0 && sign != -1.0) fail("sign must be +1 or -1");
    if (!(sigma > 0)) fail("sigma must be positive");
    if (data_band() > K) fail("data band exceeds the torus cutoff");
    if (records < 2) fail("records must be >= 2");
    if (!(T_min >= 1.0)) fail("T_min must be >= 1");
    for (double T : T_max_list)
        if (!(T > T_min)) fail("every T_max must exceed T_min");
    if (!(profile_sigma > 0)) fail("profile_sigma must be positive");
    if (static_cast<int>(profile_mode.size()) > d) fail("profile_mode has more than d entries");
    if (!(relative_step > 0) || !(max_step > 0)) fail("backward steps must be positive");
    if (iterations < 1) fail("iterations must be >= 1");
    if (!(forward_dt > 0)) fail("forward_dt must be positive");
}

nlohmann::json SimConfig::to_json() const {
    return {{"experiment", experiment}, {"d", d}, {"K", K}, {"L", L}, {"nx", nx}, {"dt", dt},
            {"tau_dt", tau_dt}, {"t0", t0}, {"t1", t1}, {"eps", eps}, {"alpha", alpha_value()},
            {"s", s_value()}, {"sign", sign}, {"seed", seed}, {"sigma", sigma},
            {"data_modes", data_band()}, {"records", records}, {"snapshot_every", snapshot_every},
            {"fit_lo", fit_low()}, {"fit_hi", fit_high()}, {"out", out}, {"suite", suite},
            {"T_min", T_min}, {"T_max_list", T_max_list}, {"T_ref", T_ref},
            {"profile_sigma", profile_sigma}, {"profile_mode", profile_mode},
            {"relative_step", relative_step}, {"max_step", max_step}, {"iterations", iterations},
            {"forward_dt", forward_dt}};
}

SimConfig SimConfig::from_json(const nlohmann::json& j) {
    SimConfig c;
    const nlohmann::json known = c.to_json();
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.contains(it.key())) throw ConfigError("unknown config key: " + it.key());
    try {
        auto get = [&](const char* k, auto& v) {
            if (j.contains(k)) v = j.at(k).get<std::decay_t<decltype(v)>>();
        };
        get("experiment", c.experiment);
        get("d", c.d);
        get("K", c.K);
        get("L", c.L);
        get("nx", c.nx);
        get("dt", c.dt);
        get("tau_dt", c.tau_dt);
        get("t0", c.t0);
        get("t1", c.t1);
        get("eps", c.eps);
        get("alpha", c.alpha);
        get("s", c.s);
        get("sign", c.sign);
        get("seed", c.seed);
        get("sigma", c.sigma);
        get("data_modes", c.data_modes);
        get("records", c.records);
        get("snapshot_every", c.snapshot_every);
        get("fit_lo", c.fit_lo);
        get("fit_hi", c.fit_hi);
        get("out", c.out);
        get("suite", c.suite);
        get("T_min", c.T_min);
        get("T_max_list", c.T_max_list);
        get("T_ref", c.T_ref);
        get("profile_sigma", c.profile_sigma);
        get("profile_mode", c.profile_mode);
        get("relative_step", c.relative_step);
        get("max_step", c.max_step);
        get("iterations", c.iterations);
        get("forward_dt", c.forward_dt);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return SimConfig::from_json(j);
}

}  // namespace rnls
