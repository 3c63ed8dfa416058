#include <filesystem>
#include <fstream>
#include <set>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "rnls/fft.hpp"
#include "rnls/resonance.hpp"

using namespace rnls;

namespace {

std::vector<cplx> span_to_vec(const TorusColumn& c) { return c; }

long level(const TorusSpectrum& sp, const FrequencyTuple& q, std::size_t k) {
    const int d = sp.dimension();
    return oracle::norm2(sp.mode(q.k1), d) - oracle::norm2(sp.mode(q.k2), d) +
           oracle::norm2(sp.mode(q.k3), d) - oracle::norm2(sp.mode(k), d);
}

}  // namespace

TEST_CASE("d=1 K=2 resonant set of the zero mode") {
    auto t = ResonanceTable::build(1, 2);
    const auto& sp = t->spectrum();
    const std::size_t k0 = sp.zero_index();
    std::set<std::tuple<int, int, int>> got;
    for (const auto& q : t->resonant(k0))
        got.insert({sp.mode(q.k1)[0], sp.mode(q.k2)[0], sp.mode(q.k3)[0]});
    std::set<std::tuple<int, int, int>> expect;
    for (int m = -2; m <= 2; ++m) {
        expect.insert({m, m, 0});
        expect.insert({0, m, m});
    }
    CHECK(expect.size() == 9);
    CHECK(got == expect);
}

TEST_CASE("table invariants against a quadruple loop") {
    for (auto [d, K] : std::vector<std::pair<int, int>>{{1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
        auto t = ResonanceTable::build(d, K);
        const auto& sp = t->spectrum();
        const std::size_t n = sp.mode_count();
        std::map<std::pair<std::size_t, long>, std::size_t> brute;
        std::uint64_t total = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    for (std::size_t k = 0; k < n; ++k) {
                        const auto s = oracle::mode_sum(sp.mode(a), sp.mode(b), sp.mode(c));
                        if (s != sp.mode(k)) continue;
                        const long om = oracle::norm2(sp.mode(a), d) - oracle::norm2(sp.mode(b), d) +
                                        oracle::norm2(sp.mode(c), d) - oracle::norm2(sp.mode(k), d);
                        ++brute[{k, om}];
                        ++total;
                    }
        CHECK(t->total_tuples() == total);
        std::map<std::pair<std::size_t, long>, std::size_t> mine;
        for (std::size_t k = 0; k < n; ++k) {
            const auto tup = t->tuples(k);
            std::size_t covered = 0;
            std::set<std::tuple<int, int, int>> seen;
            for (const auto& g : t->groups(k)) {
                for (auto i = g.begin; i < g.end; ++i) {
                    CHECK(level(sp, tup[i], k) == g.omega);
                    CHECK(oracle::mode_sum(sp.mode(tup[i].k1), sp.mode(tup[i].k2),
                                           sp.mode(tup[i].k3)) == sp.mode(k));
                    seen.insert({tup[i].k1, tup[i].k2, tup[i].k3});
                }
                mine[{k, g.omega}] += g.end - g.begin;
                covered += g.end - g.begin;
            }
            CHECK(covered == tup.size());
            CHECK(seen.size() == tup.size());
            // symmetry (k1,k2,k3) <-> (k3,k2,k1)
            for (const auto& q : tup) CHECK(seen.count({q.k3, q.k2, q.k1}) == 1);
            // the diagonal tuple is resonant
            bool diag = false;
            for (const auto& q : t->resonant(k))
                diag |= (q.k1 == static_cast<int>(k) && q.k2 == static_cast<int>(k) &&
                         q.k3 == static_cast<int>(k));
            CHECK(diag);
        }
        CHECK(mine == brute);
        std::uint64_t sum = 0;
        for (auto [om, c] : t->level_counts()) sum += c;
        CHECK(sum == total);
    }
}

TEST_CASE("d=1 closed form of the resonant form") {
    std::mt19937_64 rng(1);
    for (int K = 1; K <= 16; ++K) {
        auto t = ResonanceTable::build(1, K, TableScope::resonant);
        for (int draw = 0; draw < 5; ++draw) {
            auto f = oracle::random_column(t->mode_count(), rng);
            auto r = resonant_form_R(f, f, f, *t);
            double mass = 0;
            for (auto z : f) mass += std::norm(z);
            for (std::size_t k = 0; k < f.size(); ++k) {
                const cplx expect = 2.0 * mass * f[k] - std::norm(f[k]) * f[k];
                CHECK(std::abs(r[k] - expect) < 1e-12 * (1 + std::abs(expect)));
            }
        }
    }
}

TEST_CASE("forms against brute force and the transform-based product") {
    std::mt19937_64 rng(2);
    auto t = ResonanceTable::build(2, 2);
    const auto& sp = t->spectrum();
    auto f1 = oracle::random_column(sp.mode_count(), rng);
    auto f2 = oracle::random_column(sp.mode_count(), rng);
    auto f3 = oracle::random_column(sp.mode_count(), rng);
    auto R = resonant_form_R(f1, f2, f3, *t);
    auto Rb = oracle::brute_form(sp, f1, f2, f3, [](long om) { return om == 0 ? 1.0 : 0.0; });
    const double tt = 0.7;
    auto E = nonresonant_form_E(f1, f2, f3, tt, *t);
    auto Eb = oracle::brute_form(sp, f1, f2, f3, [&](long om) {
        return om == 0 ? cplx{} : std::polar(1.0, 0.5 * om * tt);
    });
    auto D = weighted_form_D(f1, f2, f3, tt, *t);
    auto Db = oracle::brute_form(sp, f1, f2, f3, [&](long om) {
        return om == 0 ? cplx{} : (2.0 / tt) * std::polar(1.0, 0.5 * om * tt) / cplx(0.0, om);
    });
    auto full = full_form(f1, f2, f3, *t);
    auto E0 = nonresonant_form_E(f1, f2, f3, 0.0, *t);
    std::vector<cplx> prod(sp.mode_count());
    torus_cubic(sp, 1, f1.data(), f2.data(), f3.data(), prod.data());
    for (std::size_t k = 0; k < sp.mode_count(); ++k) {
        CHECK(std::abs(R[k] - Rb[k]) < 1e-12);
        CHECK(std::abs(E[k] - Eb[k]) < 1e-12);
        CHECK(std::abs(D[k] - Db[k]) < 1e-12);
        CHECK(std::abs(full[k] - R[k] - E0[k]) < 1e-12);
        CHECK(std::abs(full[k] - prod[k]) < 1e-12);
    }
    CHECK_THROWS_AS(weighted_form_D(f1, f2, f3, 0.0, *t), DomainError);
    std::vector<cplx> z(sp.mode_count());
    for (auto v : resonant_form_R(f1, z, f3, *t)) CHECK(v == cplx{});
    TorusColumn wrong(3);
    CHECK_THROWS_AS(resonant_form_R(wrong, wrong, wrong, *t), ShapeError);
}

TEST_CASE("single-tuple phases") {
    // d=1: modes (1, 0, 1) -> k = 2 has omega = 1 - 0 + 1 - 4 = -2;
    // modes (2, 1, 0) -> k = 1 has omega = 4 - 1 + 0 - 1 = 2.
    auto t = ResonanceTable::build(1, 2);
    const auto& sp = t->spectrum();
    std::vector<cplx> a(sp.mode_count()), b(sp.mode_count()), c(sp.mode_count());
    a[sp.index({2, 0, 0, 0})] = 1.0;
    b[sp.index({1, 0, 0, 0})] = 1.0;
    c[sp.index({0, 0, 0, 0})] = 1.0;
    const std::size_t k1 = sp.index({1, 0, 0, 0});
    for (double tt : {0.0, 0.4, 1.3}) {
        auto E = nonresonant_form_E(a, b, c, tt, *t);
        CHECK(std::abs(E[k1] - std::polar(1.0, tt)) < 1e-14);
    }
    auto D = weighted_form_D(a, b, c, 1.0, *t);
    CHECK(std::abs(D[k1] - std::polar(1.0, 1.0) / cplx(0.0, 1.0)) < 1e-14);
}

TEST_CASE("resonant form is Hamiltonian") {
    std::mt19937_64 rng(3);
    auto t = ResonanceTable::build(2, 3, TableScope::resonant);
    auto f = oracle::random_column(t->mode_count(), rng);
    auto r = resonant_form_R(f, f, f, *t);
    cplx s{}, s1{};
    for (std::size_t k = 0; k < f.size(); ++k) {
        s += std::conj(f[k]) * r[k];
        s1 += static_cast<double>(t->spectrum().norm2(k)) * std::conj(f[k]) * r[k];
    }
    CHECK(std::abs(s.imag()) < 1e-10 * std::abs(s));
    CHECK(std::abs(s1.imag()) < 1e-10 * std::abs(s1));
}

TEST_CASE("resource guard and cache file") {
    CHECK_THROWS_AS(ResonanceTable::build(4, 3, TableScope::full, 1000), ResourceError);
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / "rnls_table_test.rnlt";
    auto t = ResonanceTable::build(2, 2);
    t->save(p.string());
    auto u = ResonanceTable::load(p.string());
    CHECK(u->total_tuples() == t->total_tuples());
    CHECK(u->level_counts() == t->level_counts());
    for (std::size_t k = 0; k < t->mode_count(); ++k) {
        REQUIRE(u->tuples(k).size() == t->tuples(k).size());
        for (std::size_t i = 0; i < t->tuples(k).size(); ++i)
            CHECK(u->tuples(k)[i].k2 == t->tuples(k)[i].k2);
    }
    {
        std::fstream s(p, std::ios::in | std::ios::out | std::ios::binary);
        s.seekp(4);
        const std::uint32_t bad = 99;
        s.write(reinterpret_cast<const char*>(&bad), 4);
    }
    CHECK_THROWS_AS(ResonanceTable::load(p.string()), FormatError);
    auto c = ResonanceTable::cached(p.string(), 2, 2);  // rebuilds a stale cache
    CHECK(c->total_tuples() == t->total_tuples());
    CHECK(ResonanceTable::load(p.string())->total_tuples() == t->total_tuples());
    fs::remove(p);
}

TEST_CASE("bound sweeps") {
    auto d1 = ResonanceTable::build(1, 3, TableScope::resonant);
    TorusColumn single(d1->mode_count());
    single[d1->spectrum().zero_index()] = 1.0;
    CHECK(trilinear_ratio(single, single, single, *d1) <= 2.0);
    TorusColumn zero(d1->mode_count());
    CHECK(trilinear_ratio(zero, single, single, *d1) < 0);

    auto f1 = ResonanceTable::build(1, 6);
    TorusColumn delta(f1->mode_count());
    delta[f1->spectrum().zero_index()] = 1.0;
    CHECK(elementary_ratio(delta, delta, delta, *f1) == doctest::Approx(1.0));
    TorusColumn z(f1->mode_count());
    CHECK(elementary_ratio(z, z, z, *f1) < 0);

    const BoundReport e = verify_elementary_bound(200, 6, 1);
    CHECK(e.used == 200);
    CHECK(std::isfinite(e.max_constant));
    CHECK(e.max_constant <= 1.0 + 1e-12);

    const BoundReport a = verify_trilinear_bound(300, 2, 4, 1);
    const BoundReport b = verify_trilinear_bound(300, 2, 4, 2);
    CHECK(std::isfinite(a.max_constant));
    CHECK(a.max_constant > 0);
    CHECK(std::abs(a.max_constant - b.max_constant) <= 0.1 * a.max_constant);
}
