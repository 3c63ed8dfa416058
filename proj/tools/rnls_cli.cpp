#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rnls/config.hpp"
#include "rnls/errors.hpp"
#include "rnls/experiments.hpp"
#include "rnls/verify.hpp"

namespace {

enum Exit { ok = 0, check_failed = 1, unstable = 2, config_error = 3 };

struct Overrides {
    std::string config;
    std::optional<int> dim, cutoff;
    std::optional<double> box, dt, eps, t0, t1;
    std::optional<std::size_t> nx;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out, suite;
};

void add_flags(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "JSON configuration file");
    app->add_option("--dim", o.dim, "torus dimension d (1..4)");
    app->add_option("--cutoff", o.cutoff, "torus mode cutoff K");
    app->add_option("--box", o.box, "half width L of the line box [-L, L)");
    app->add_option("--nx", o.nx, "number of line grid points");
    app->add_option("--dt", o.dt, "time step");
    app->add_option("--eps", o.eps, "initial data size");
    app->add_option("--t0", o.t0, "initial time");
    app->add_option("--t1", o.t1, "final time");
    app->add_option("--seed", o.seed, "random seed");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--suite", o.suite, "verification suite");
}

rnls::SimConfig resolve(const Overrides& o) {
    rnls::SimConfig c = o.config.empty() ? rnls::SimConfig{} : rnls::load_config(o.config);
    if (o.dim) c.d = *o.dim;
    if (o.cutoff) c.K = *o.cutoff;
    if (o.box) c.L = *o.box;
    if (o.nx) c.nx = *o.nx;
    if (o.dt) c.dt = *o.dt;
    if (o.eps) c.eps = *o.eps;
    if (o.t0) c.t0 = *o.t0;
    if (o.t1) c.t1 = *o.t1;
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.out = *o.out;
    if (o.suite) c.suite = *o.suite;
    c.validate();
    return c;
}

int report(const rnls::RunManifest& m) {
    for (const auto& c : m.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.value << " (threshold " << c.threshold
                  << ") " << c.detail << '\n';
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
    return m.passed() ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral simulation and verification of cubic NLS on R x T^d"};
    app.require_subcommand(1);
    Overrides o;
    struct Command {
        const char* name;
        const char* help;
        rnls::RunManifest (*run)(const rnls::SimConfig&);
    };
    const Command commands[] = {
        {"simulate", "evolve the equation and record norm trajectories", rnls::cmd_simulate},
        {"compare", "compare the solution with its asymptotic profile", rnls::cmd_compare_asymptotics},
        {"resonant", "evolve the resonant system and audit its invariants", rnls::cmd_resonant},
        {"complete", "backward solve from a prescribed asymptotic profile", rnls::cmd_complete},
        {"verify", "run a verification suite", rnls::cmd_verify},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const Command& c : commands) {
        CLI::App* s = app.add_subcommand(c.name, c.help);
        add_flags(s, o);
        subs.emplace_back(s, &c);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }
    try {
        const rnls::SimConfig cfg = resolve(o);
        for (auto& [s, c] : subs)
            if (s->parsed()) return report(c->run(cfg));
    } catch (const rnls::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const rnls::InstabilityError& e) {
        std::cerr << "instability: " << e.what() << '\n';
        return unstable;
    } catch (const rnls::DivergenceError& e) {
        std::cerr << "divergence at iteration " << e.iteration << ": " << e.what() << '\n';
        return unstable;
    } catch (const rnls::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return check_failed;
    }
    return ok;
}
