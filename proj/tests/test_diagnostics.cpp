#include "doctest.h"
#include "oracles.hpp"
#include "rnls/diagnostics.hpp"
#include "rnls/profile.hpp"

using namespace rnls;

TEST_CASE("phase function") {
    const PhaseValues z = phase_psi({2.0, 0.0, 0.0, 0.0, 3});
    CHECK(z.psi == doctest::Approx(3.0));
    CHECK(z.dpsi == doctest::Approx(1.5));
    CHECK(z.ddpsi == 0.0);
    const PhaseContext c{1.7, 0.9, -0.4, 0.3, -2};
    const double h = 1e-4;
    auto at = [&](double t) {
        PhaseContext d = c;
        d.t = t;
        return phase_psi(d);
    };
    const PhaseValues p = at(c.t);
    CHECK(p.dpsi == doctest::Approx((at(c.t + h).psi - at(c.t - h).psi) / (2 * h)).epsilon(1e-7));
    CHECK(p.ddpsi == doctest::Approx((at(c.t + h).dpsi - at(c.t - h).dpsi) / (2 * h)).epsilon(1e-7));
    // resonance center: xi^2 = (xi - eta - kappa)^2 = t^2 omega / 2
    const double t = 3.0;
    const double xi = t * std::sqrt(2.0 / 2.0);
    const PhaseValues r = phase_psi({t, xi, 2 * xi, 0.0, 2});
    CHECK(std::abs(r.dpsi) < 1e-14);
    CHECK_THROWS_AS(phase_psi({0.0, 0, 0, 0, 1}), DomainError);
}

TEST_CASE("frequency cutoffs") {
    const double t = 5.0;
    const double xi = t * std::sqrt(0.5 * 4);
    const CutoffValues c = cutoffs({t, xi, 2 * xi, 0.0, 4});
    CHECK(c.defined);
    CHECK(c.chi2 == 1.0);
    CHECK(c.chi1 == 0.0);
    CHECK(c.region == Region::omega2);
    // |xi^2/(t^2 omega) - 1/2| >= 4 t^{-3/8} -> chi2 = 0
    const double off = std::sqrt((0.5 + 4.0 * std::pow(t, -0.375)) * t * t * 4);
    const CutoffValues o = cutoffs({t, off, 0.0, 0.0, 4});
    CHECK(o.chi2 == 0.0);
    CHECK(o.region == Region::omega1);
    CHECK(!cutoffs({t, 1.0, 0.0, 0.0, 0}).defined);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int i = 0; i < 1000; ++i) {
        const CutoffValues v = cutoffs({t, u(rng), u(rng), u(rng), 1 + i % 7});
        CHECK(v.chi1 + v.chi2 == 1.0);
        CHECK(v.chi2 >= 0.0);
        CHECK(v.chi2 <= 1.0);
    }
}

TEST_CASE("pullback is unitary and inverted by the pushforward") {
    std::mt19937_64 rng(2);
    ProfileField V(LineGrid(4.0, 32), TorusSpectrum(2, 2), 2.5);
    oracle::fill_random(V, rng);
    const ProfileField Z = pullback_S(V);
    CHECK(norm(Z, NormKind::L2) == doctest::Approx(norm(V, NormKind::L2)).epsilon(1e-13));
    CHECK(oracle::max_diff(pushforward_S(Z), V) < 1e-12);
}

TEST_CASE("exact e-term decomposition") {
    auto table = ResonanceTable::build(2, 2);
    std::mt19937_64 rng(3);
    for (double t : {1.5, 3.0, 7.0}) {
        ProfileField w(LineGrid(6.0, 32), table->spectrum(), t), V = w;
        oracle::fill_smooth(w, rng, 1.5, 0.2);
        oracle::fill_smooth(V, rng, 1.5, 0.2);
        const ProfileField g = extract_gamma(w);
        const ETerms e = decompose_e_terms(w, g, V, *table);
        CHECK(e.sum_check <= 1e-10);
        CHECK(norm(e.target, NormKind::L2) > 1e-4);
        CHECK(norm(e.e3, NormKind::L2) > 0.0);
        const ETerms same = decompose_e_terms(g, g, V, *table);
        CHECK(oracle::max_abs(same.e1) == 0.0);
        const ETerms zero = decompose_e_terms(w, g, V.zeros_like(), *table);
        for (const ProfileField* f : {&zero.e1, &zero.e2, &zero.e3, &zero.e4})
            CHECK(oracle::max_abs(*f) == 0.0);
    }
    ProfileField big(LineGrid(6.0, 128), table->spectrum(), 2.0);
    CHECK_THROWS_AS(decompose_e_terms(big, big, big, *table), ResourceError);
    auto res = ResonanceTable::build(2, 2, TableScope::resonant);
    ProfileField small(LineGrid(6.0, 8), table->spectrum(), 2.0);
    CHECK_THROWS_AS(decompose_e_terms(small, small, small, *res), DomainError);
}

TEST_CASE("quadrilinear form") {
    auto table = ResonanceTable::build(1, 2);
    const TorusSpectrum& sp = table->spectrum();
    std::mt19937_64 rng(4);
    const double t = 2.0;
    const LineGrid vg(oracle::pi, 8);
    ProfileField f(vg, sp, t);
    oracle::fill_random(f, rng);
    CHECK(std::abs(quadrilinear_O1(f, f, f.zeros_like(), f, t, *table).value) == 0.0);

    // single term: f1 = f3 = delta at (v-frequency 0, mode 2), f2 = delta at
    // (v-frequency 0, mode 1), f4 at (v-frequency 0, mode 3)... within K = 2 the
    // output mode is 2 - 1 + 2 = 3 > K, so use f1 = mode 2, f2 = mode 1, f3 = mode 0
    // (output mode 1, omega = 4 - 1 + 0 - 1 = 2) and all v-frequencies zero.
    auto delta = [&](std::size_t m) {
        ProfileField d(vg, sp, t, Representation::spectral);
        d(0, m) = 1.0;
        return transform_x(d, Direction::inverse);
    };
    const std::size_t m2 = sp.index({2, 0, 0, 0}), m1 = sp.index({1, 0, 0, 0}),
                      m0 = sp.index({0, 0, 0, 0});
    const O1Value v = quadrilinear_O1(delta(m2), delta(m1), delta(m0), delta(m1), t, *table);
    // Psi = t omega / 2 = 2, Psi' = omega / 2 = 1; chi1 at zero frequency with
    // omega = 2: chi2 = X(t^{3/8}/2 (0 - 1/2))^2
    const double c2 = std::pow(SmoothCutoff::value(0.5 * std::pow(t, 0.375) * (-0.5)), 2);
    const cplx weight = (1.0 - c2) * std::polar(1.0, -2.0) / cplx(0.0, -1.0);
    // lattice normalization: f^ entries are 1 (unitary DFT), prefactor 1/(t N),
    // pairing weight dv (2 pi)^d
    const cplx expect = weight / (t * 8.0) * vg.spacing() * 2.0 * oracle::pi;
    CHECK(std::abs(v.value - expect) < 1e-13);
    CHECK(v.excluded == 0);
}
