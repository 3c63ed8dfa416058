#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "rnls/experiments.hpp"
#include "rnls/snapshot.hpp"
#include "rnls/verify.hpp"

using namespace rnls;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rnls_test_io_" + name);
    fs::remove_all(p);
    return p;
}

SimConfig tiny(const fs::path& out) {
    SimConfig c;
    c.d = 1;
    c.K = 2;
    c.L = 24.0;
    c.nx = 128;
    c.dt = 0.05;
    c.t0 = 1.0;
    c.t1 = 3.0;
    c.eps = 0.1;
    c.records = 8;
    c.out = out.string();
    return c;
}

json read_json(const fs::path& p) {
    std::ifstream is(p);
    return json::parse(is);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RNLS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing and validation") {
    SimConfig c;
    c.d = 2;
    c.K = 3;
    c.eps = 0.05;
    c.T_max_list = {8.0, 16.0};
    const SimConfig back = SimConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK(c.alpha_value() == doctest::Approx(1.1));
    CHECK(c.s_value() == doctest::Approx(3.3));
    CHECK_THROWS_AS(SimConfig::from_json(json{{"dimension", 2}}), ConfigError);
    CHECK_THROWS_AS(SimConfig::from_json(json{{"d", "two"}}), ConfigError);
    SimConfig bad;
    bad.d = 5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = SimConfig{};
    bad.alpha = 0.4;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = SimConfig{};
    bad.t1 = 0.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = SimConfig{};
    bad.eps = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    CHECK_THROWS_AS(suite_criteria("nonsense"), ConfigError);
    CHECK(suite_criteria("all").size() == 12);
    CHECK(suite_criteria("empty").empty());
}

TEST_CASE("initial data normalization") {
    for (int d : {1, 2}) {
        SimConfig c = tiny(scratch("init"));
        c.d = d;
        c.eps = 0.2;
        const ProductField u = initial_data(c);
        const double a = norm(multiply_coordinate(u), NormKind::L2) +
                         norm(frac_derivative(u, c.s_value(), Axis::y, false), NormKind::L2);
        CHECK(a == doctest::Approx(0.2).epsilon(1e-13));
        CHECK(u.time() == 1.0);
    }
    SimConfig z = tiny(scratch("init0"));
    z.eps = 0.0;
    CHECK(oracle::max_abs(initial_data(z)) == 0.0);
}

TEST_CASE("record steps") {
    SimConfig c = tiny(scratch("steps"));
    c.records = 16;
    const auto n = record_steps(c);
    CHECK(n.front() == 0);
    CHECK(n.back() == 40);
    for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] > n[i - 1]);
}

TEST_CASE("simulate writes a complete, deterministic manifest") {
    const fs::path dir = scratch("sim");
    SimConfig c = tiny(dir);
    c.snapshot_every = 3;
    const RunManifest m = cmd_simulate(c);
    CHECK(m.passed());
    const json j = read_json(dir / "manifest.json");
    CHECK(j["command"] == "simulate");
    CHECK(j["config"] == c.to_json());
    for (const auto& f : j["files"]) CHECK(fs::exists(dir / f.get<std::string>()));
    // header columns are documented
    std::ifstream csv(dir / "trajectory.csv");
    std::string header;
    std::getline(csv, header);
    std::stringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) CHECK(j["columns"]["trajectory.csv"].contains(col));
    // snapshots parse and carry the recorded norms
    for (const auto& s : j["diagnostics"]["snapshots"]) {
        const ProductField u = read_product_snapshot((dir / s["file"].get<std::string>()).string());
        CHECK(u.time() == doctest::Approx(s["t"].get<double>()));
        CHECK(mass(u) == doctest::Approx(s["mass"].get<double>()).epsilon(1e-14));
    }
    CHECK(!fs::exists(dir / ".rnls.lock"));
    json a = j;
    cmd_simulate(c);
    json b = read_json(dir / "manifest.json");
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a == b);
}

TEST_CASE("zero data run passes every check") {
    const fs::path dir = scratch("zero");
    SimConfig c = tiny(dir);
    c.eps = 0.0;
    const RunManifest m = cmd_simulate(c);
    CHECK(m.passed());
    CHECK(m.checks.size() == 4);
}

TEST_CASE("locked output directory is rejected") {
    const fs::path dir = scratch("lock");
    fs::create_directories(dir);
    std::ofstream(dir / ".rnls.lock") << "x";
    CHECK_THROWS_AS(cmd_simulate(tiny(dir)), ConfigError);
}

TEST_CASE("asymptotic comparison of an exact ansatz vanishes") {
    const TorusSpectrum sp(1, 1);
    ProfileField W(LineGrid(2.0, 64), sp, 4.0);
    std::mt19937_64 rng(5);
    oracle::fill_smooth(W, rng, 0.3, 0.1);
    const ScatteringError e = scattering_error(asymptotic_ansatz(W), W);
    CHECK(e.l2 < 1e-15);
    CHECK(e.linf_h_alpha < 1e-15);

    const fs::path dir = scratch("compare");
    SimConfig c = tiny(dir);
    c.t1 = 4.0;
    c.fit_lo = 1.0;
    c.fit_hi = 4.0;
    const RunManifest m = cmd_compare_asymptotics(c);
    const json j = read_json(dir / "scattering.json");
    CHECK(j["times"].size() == j["err_L2"].size());
    CHECK(j["times"].size() == j["resonant_gap"].size());
    // at t1 the profile is gamma(t1), so the error is the high-frequency part of w(t1)
    const Trajectory tr = simulate(c, true);
    const ProfileField w1 = extract_w(tr.states.back());
    const double high = norm(w1 - extract_gamma(w1), NormKind::L2);
    CHECK(j["err_L2"].back().get<double>() == doctest::Approx(high).epsilon(1e-12));
    CHECK(fs::exists(dir / "scattering.csv"));
    CHECK(m.checks.size() == 2);
}

TEST_CASE("resonant and completeness commands") {
    const fs::path dir = scratch("res");
    SimConfig c = tiny(dir);
    c.nx = 4;
    c.L = 2.0;
    c.t1 = 4.0;
    const RunManifest r = cmd_resonant(c);
    CHECK(r.passed());
    CHECK(fs::exists(dir / "resonant_final.rnls"));
    const ProfileField G = read_profile_snapshot((dir / "resonant_final.rnls").string());
    CHECK(G.time() == doctest::Approx(4.0));

    const fs::path dir2 = scratch("complete");
    SimConfig z = tiny(dir2);
    z.eps = 0.0;
    z.K = 1;
    const RunManifest m = cmd_complete(z);
    CHECK(m.passed());
}

TEST_CASE("CLI exit codes") {
    const std::string out = " --out " + scratch("cli").string();
    CHECK(run_cli("verify --suite empty" + out) == 0);
    CHECK(run_cli("verify --suite identities --seed 2" + out) == 0);
    CHECK(run_cli("simulate --dim 7" + out) == 3);
    CHECK(run_cli("verify --suite bogus" + out) == 3);
    CHECK(run_cli("simulate --config /nonexistent.json" + out) == 3);
    CHECK(run_cli("frobnicate") == 3);
    // small box: mass reaches the boundary and the check fails
    CHECK(run_cli("simulate --box 4 --nx 32 --t1 8 --eps 0.1" + out) == 1);
    // oversized data with a long step: the implicit midpoint iteration does not contract
    CHECK(run_cli("simulate --box 8 --nx 32 --eps 100 --dt 0.5 --t1 4" + out) == 2);
    CHECK(run_cli("simulate --box 24 --nx 128 --t1 3 --dt 0.05" + out) == 0);
}
