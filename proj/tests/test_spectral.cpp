#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rnls/cutoff.hpp"
#include "rnls/snapshot.hpp"
#include "rnls/spectral.hpp"

using namespace rnls;
using oracle::pi;

TEST_CASE("line grid points and frequencies") {
    LineGrid g(pi, 8);
    CHECK(g.spacing() == doctest::Approx(pi / 4));
    CHECK(g.point(0) == doctest::Approx(-pi));
    CHECK(g.point(7) + g.spacing() == doctest::Approx(pi));
    const std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
    for (std::size_t j = 0; j < 8; ++j) CHECK(g.frequency(j) == doctest::Approx(expect[j]));
    CHECK_THROWS_AS(LineGrid(1.0, 7), Error);
}

TEST_CASE("torus spectrum ordering and dealias size") {
    CHECK(smooth_fft_size(9) == 9);
    CHECK(smooth_fft_size(11) == 12);
    CHECK(smooth_fft_size(13) == 14);
    CHECK(smooth_fft_size(17) == 18);
    TorusSpectrum s(2, 1);
    CHECK(s.mode_count() == 9);
    CHECK(s.mode(0)[0] == -1);
    CHECK(s.mode(0)[1] == -1);
    CHECK(s.mode(1)[1] == 0);
    CHECK(s.mode(3)[0] == 0);
    CHECK(s.zero_index() == 4);
    CHECK(s.norm2(0) == 2);
    CHECK(s.dealias_size() >= 5);
    for (std::size_t m = 0; m < s.mode_count(); ++m) CHECK(s.index(s.mode(m)) == m);
    CHECK(s.index({2, 0, 0, 0}) == s.mode_count());
    CHECK_THROWS(TorusSpectrum(2, 2, 6));
    CHECK_THROWS(TorusSpectrum(5, 1));
}

TEST_CASE("raised cosine cutoff") {
    CHECK(SmoothCutoff::value(0.3) == 1.0);
    CHECK(SmoothCutoff::value(-2.5) == 0.0);
    CHECK(SmoothCutoff::value(1.5) == doctest::Approx(0.5));
    CHECK(SmoothCutoff::derivative(1.0) == 0.0);
    const double h = 1e-6;
    for (double r : {1.2, 1.5, 1.9, -1.3}) {
        const double fd = (SmoothCutoff::value(r + h) - SmoothCutoff::value(r - h)) / (2 * h);
        CHECK(SmoothCutoff::derivative(r) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("transform along the line") {
    std::mt19937_64 rng(7);
    ProductField f(LineGrid(3.0, 16), TorusSpectrum(1, 1), 0.5);
    oracle::fill_random(f, rng);
    ProductField F = transform_x(f, Direction::forward);
    ProductField N = oracle::naive_dft(f);
    CHECK(oracle::max_diff(F, N) < 1e-12);
    ProductField back = transform_x(F, Direction::inverse);
    CHECK(oracle::max_diff(back, f) < 1e-13 * oracle::max_abs(f));
    CHECK_THROWS_AS(transform_x(F, Direction::forward), RepresentationError);
    CHECK_THROWS_AS(transform_x(f, Direction::inverse), RepresentationError);
    CHECK(norm(F, NormKind::L2) == doctest::Approx(norm(f, NormKind::L2)).epsilon(1e-13));

    // plane wave at frequency index 3 maps to a single spectral entry
    ProductField p(LineGrid(3.0, 16), TorusSpectrum(1, 0), 0.0);
    for (std::size_t j = 0; j < 16; ++j) p(j, 0) = std::polar(1.0, 2 * pi * 3.0 * j / 16.0);
    ProductField P = transform_x(p, Direction::forward);
    for (std::size_t j = 0; j < 16; ++j)
        CHECK(std::abs(P(j, 0)) == doctest::Approx(j == 3 ? 4.0 : 0.0));
}

TEST_CASE("Littlewood-Paley projections") {
    std::mt19937_64 rng(3);
    ProductField f(LineGrid(10.0, 64), TorusSpectrum(1, 1), 0.0);
    oracle::fill_random(f, rng);
    const double N = 2.0;
    ProductField lo = lp_project(f, LpKind::low, N / 2), hi = lp_project(f, LpKind::high, N);
    CHECK(oracle::max_diff(lo + hi, f) < 1e-12);
    ProductField a = lp_project(f, LpKind::low, N), b = lp_project(f, LpKind::band, 2 * N),
                 c = lp_project(f, LpKind::high, 4 * N);
    CHECK(oracle::max_diff(a + b + c, f) < 1e-12);
    ProductField id = lp_project(f, LpKind::low, 100.0);
    CHECK(oracle::max_diff(id, f) < 1e-12);
    CHECK_THROWS_AS(lp_project(f, LpKind::low, 0.0), DomainError);

    // a spectral delta at frequency 1.5 N is scaled by the cutoff value
    LineGrid g(pi, 32);
    ProductField d(g, TorusSpectrum(1, 0), 0.0, Representation::spectral);
    d(6, 0) = 1.0;  // frequency 6
    ProductField pd = lp_project(d, LpKind::low, 4.0);
    CHECK(pd(6, 0).real() == doctest::Approx(SmoothCutoff::value(1.5)));
}

TEST_CASE("fractional derivatives") {
    std::mt19937_64 rng(5);
    ProductField f(LineGrid(4.0, 8), TorusSpectrum(1, 4), 0.0);
    oracle::fill_random(f, rng);
    CHECK(oracle::max_diff(frac_derivative(f, 0.0, Axis::y, false), f) == 0.0);
    ProductField h = frac_derivative(f, 2.0, Axis::y, true);
    ProductField g = frac_derivative(f, 1.55, Axis::y, false);
    for (std::size_t j = 0; j < f.points(); ++j)
        for (std::size_t m = 0; m < f.modes(); ++m) {
            const double k = f.spectrum().mode(m)[0];
            CHECK(std::abs(h(j, m) - k * k * f(j, m)) < 1e-12);
            CHECK(std::abs(g(j, m) - std::pow(1 + k * k, 0.775) * f(j, m)) < 1e-12);
        }
}

TEST_CASE("line derivative of a trigonometric function") {
    LineGrid g(5.0, 64);
    ProductField f(g, TorusSpectrum(1, 0), 0.0);
    const double k = 3 * pi / 5.0;
    for (std::size_t j = 0; j < 64; ++j) f(j, 0) = std::sin(k * g.point(j));
    ProductField df = line_derivative(f);
    for (std::size_t j = 0; j < 64; ++j)
        CHECK(std::abs(df(j, 0) - k * std::cos(k * g.point(j))) < 1e-11);
}

TEST_CASE("linear propagator") {
    LineGrid g(40.0, 512);
    TorusSpectrum sp(1, 2);
    ProductField u(g, sp, 0.0);
    const std::size_t m1 = sp.index({1, 0, 0, 0});
    for (std::size_t j = 0; j < g.count(); ++j) u(j, m1) = std::exp(-0.5 * g.point(j) * g.point(j));
    const double t = 2.0;
    ProductField ut = linear_propagator(u, t);
    CHECK(ut.time() == doctest::Approx(2.0));
    double err = 0.0;
    for (std::size_t j = 0; j < g.count(); ++j) {
        const double x = g.point(j);
        const cplx a = cplx(1.0, t);
        const cplx exact = std::exp(-0.5 * x * x / a) / std::sqrt(a) * std::polar(1.0, -0.5 * t);
        err = std::max(err, std::abs(ut(j, m1) - exact));
    }
    CHECK(err < 1e-12);
    CHECK(oracle::max_diff(linear_propagator(u, 0.0), u) < 1e-15);

    std::mt19937_64 rng(11);
    ProductField r(LineGrid(8.0, 64), TorusSpectrum(2, 2), 0.0);
    oracle::fill_random(r, rng);
    ProductField ab = linear_propagator(linear_propagator(r, 0.3), 0.45);
    ProductField c = linear_propagator(r, 0.75);
    CHECK(oracle::max_diff(ab, c) < 1e-12 * oracle::max_abs(r));
    CHECK(norm(c, NormKind::L2) == doctest::Approx(norm(r, NormKind::L2)).epsilon(1e-13));

    ProductField s = linear_propagator(transform_x(r, Direction::forward), 0.75);
    CHECK(s.representation() == Representation::spectral);
    CHECK(oracle::max_diff(transform_x(s, Direction::inverse), c) < 1e-12 * oracle::max_abs(r));
}

TEST_CASE("vector field commutes with the linear flow") {
    LineGrid g(60.0, 1024);
    ProductField u(g, TorusSpectrum(1, 1), 0.0);
    std::mt19937_64 rng(2);
    oracle::fill_smooth(u, rng, 1.5);
    CHECK(oracle::max_diff(vector_field_Lx(u), multiply_coordinate(u)) == 0.0);
    const double ref = norm(multiply_coordinate(u), NormKind::L2);
    double drift = 0.0;
    ProductField v = u;
    for (int n = 0; n < 100; ++n) {
        v = linear_propagator(v, 0.1);
        drift = std::max(drift, std::abs(norm(vector_field_Lx(v), NormKind::L2) - ref));
    }
    CHECK(drift < 1e-10);
    // L_x U(t) u0 = U(t) (x u0)
    ProductField lhs = vector_field_Lx(v);
    ProductField rhs = linear_propagator(multiply_coordinate(u), v.time());
    CHECK(oracle::max_diff(lhs, rhs) < 1e-10);

    // finite difference oracle for a modulated bump
    ProductField w(LineGrid(20.0, 8192), TorusSpectrum(1, 0), 1.5);
    const double xi0 = 2.0;
    for (std::size_t j = 0; j < w.points(); ++j) {
        const double x = w.grid().point(j);
        w(j, 0) = std::exp(-x * x / 4.0) * std::polar(1.0, xi0 * x);
    }
    ProductField Lw = vector_field_Lx(w);
    const double dx = w.grid().spacing();
    double fd = 0.0;
    for (std::size_t j = 2; j + 2 < w.points(); ++j) {
        const cplx d = (-w(j + 2, 0) + 8.0 * w(j + 1, 0) - 8.0 * w(j - 1, 0) + w(j - 2, 0)) /
                       (12.0 * dx);
        const cplx ref2 = w.grid().point(j) * w(j, 0) + cplx(0.0, 1.5) * d;
        fd = std::max(fd, std::abs(Lw(j, 0) - ref2));
    }
    CHECK(fd < 1e-8);
}

TEST_CASE("norms against direct summation") {
    std::mt19937_64 rng(9);
    for (int d = 1; d <= 2; ++d) {
        ProductField f(LineGrid(6.0, 32), TorusSpectrum(d, d == 1 ? 4 : 2), 1.3);
        oracle::fill_random(f, rng, 0.3);
        const NormParams p = NormParams::defaults(d);
        const double vol = std::pow(2 * pi, d), dx = f.grid().spacing();
        double l2 = 0, best = 0, x2 = 0, ds = 0;
        ProductField Lx = vector_field_Lx(f);
        for (std::size_t j = 0; j < f.points(); ++j) {
            double loc = 0;
            for (std::size_t m = 0; m < f.modes(); ++m) {
                const double k2 = f.spectrum().norm2(m);
                l2 += std::norm(f(j, m));
                loc += std::pow(1 + k2, p.alpha) * std::norm(f(j, m));
                x2 += std::norm(f.grid().point(j) * f(j, m));
                ds += std::pow(1 + k2, p.s) * std::norm(f(j, m));
            }
            best = std::max(best, loc);
        }
        CHECK(norm(f, NormKind::L2) == doctest::Approx(std::sqrt(l2 * dx * vol)).epsilon(1e-12));
        CHECK(norm(f, NormKind::LinfxHay) == doctest::Approx(std::sqrt(best * vol)).epsilon(1e-12));
        CHECK(norm(f, NormKind::H01x) ==
              doctest::Approx(std::sqrt((l2 + x2) * dx * vol)).epsilon(1e-12));
        const double lx = oracle::l2(Lx);
        CHECK(norm(f, NormKind::Xplus) ==
              doctest::Approx(std::sqrt(lx * lx + ds * dx * vol)).epsilon(1e-12));
        CHECK(norm(f, NormKind::Y) ==
              doctest::Approx(std::sqrt(best * vol) + std::sqrt(l2 * dx * vol)).epsilon(1e-12));
        CHECK(std::abs(inner(f, f) - cplx(l2 * dx * vol)) < 1e-12 * l2 * dx * vol);
    }
    // single unit mode with |k|^2 = 2 and alpha = 1: factor 3^{1/2} (2 pi)
    ProductField s(LineGrid(1.0, 2), TorusSpectrum(2, 1), 0.0);
    s(0, s.spectrum().index({1, 1, 0, 0})) = 1.0;
    CHECK(linf_h_alpha(s, 1.0) == doctest::Approx(std::sqrt(3.0) * 2 * pi));
    ProductField z = s.zeros_like();
    for (NormKind k : {NormKind::L2, NormKind::LinfxHay, NormKind::H01x, NormKind::Xplus, NormKind::Y})
        CHECK(norm(z, k) == 0.0);
    s(1, 0) = cplx(NAN, 0.0);
    CHECK_THROWS_AS(norm(s, NormKind::L2), ComputationError);
}

TEST_CASE("field arithmetic checks shape and representation") {
    ProductField a(LineGrid(1.0, 4), TorusSpectrum(1, 1), 0.0);
    ProductField b(LineGrid(2.0, 4), TorusSpectrum(1, 1), 0.0);
    CHECK_THROWS_AS(a += b, ShapeError);
    ProductField c = transform_x(a, Direction::forward);
    CHECK_THROWS_AS(a += c, RepresentationError);
    CHECK_THROWS_AS(ProfileField(LineGrid(1.0, 4), TorusSpectrum(1, 1), 0.0), DomainError);
}

TEST_CASE("snapshot round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rnls_snapshot_test";
    fs::create_directories(dir);
    std::mt19937_64 rng(4);
    ProductField f(LineGrid(7.5, 16), TorusSpectrum(2, 1), 3.25);
    oracle::fill_random(f, rng);
    const std::string path = (dir / "u.rnls").string();
    write_snapshot(path, f);
    CHECK(fs::exists(sidecar_path(path)));
    const SnapshotHeader h = read_snapshot_header(path);
    CHECK(h.dimension == 2);
    CHECK(h.cutoff == 1);
    CHECK(h.points == 16);
    CHECK(h.time == 3.25);
    CHECK(!h.profile());
    ProductField g = read_product_snapshot(path);
    CHECK(g.same_shape(f));
    CHECK(oracle::max_diff(g, f) == 0.0);
    CHECK_THROWS_AS(read_profile_snapshot(path), FormatError);

    ProfileField w(LineGrid(1.0, 8), TorusSpectrum(1, 2), 2.0, Representation::spectral);
    oracle::fill_random(w, rng);
    const std::string wp = (dir / "w.rnls").string();
    write_snapshot(wp, w);
    ProfileField w2 = read_profile_snapshot(wp);
    CHECK(w2.representation() == Representation::spectral);
    CHECK(oracle::max_diff(w2, w) == 0.0);

    {
        std::fstream s(path, std::ios::in | std::ios::out | std::ios::binary);
        s.seekp(0);
        s.write("XXXX", 4);
    }
    CHECK_THROWS_AS(read_snapshot_header(path), FormatError);
    CHECK_THROWS_AS(read_snapshot_header((dir / "missing.rnls").string()), FormatError);
    fs::remove_all(dir);
}
