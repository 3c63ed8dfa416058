#include "rnls/diagnostics.hpp"

#include <cmath>
#include <map>

#include "rnls/cutoff.hpp"
#include "rnls/evolution.hpp"
#include "rnls/fft.hpp"
#include "rnls/spectral.hpp"

namespace rnls {

PhaseValues phase_psi(const PhaseContext& c) {
    if (!(c.t > 0.0)) throw DomainError("phase needs t > 0");
    const double z = c.xi - c.eta - c.kappa;
    const double q = z * z + c.xi * c.xi;
    const double om = static_cast<double>(c.omega);
    return {q / (2.0 * c.t) + c.t * om / 2.0, -q / (2.0 * c.t * c.t) + om / 2.0,
            q / (c.t * c.t * c.t)};
}

double chi2_factor(double frequency, double t, std::int64_t omega) {
    const double om = static_cast<double>(omega);
    return SmoothCutoff::value(0.5 * std::pow(t, 0.375) * (frequency * frequency / (t * t * om) - 0.5));
}

CutoffValues cutoffs(const PhaseContext& c) {
    if (!(c.t > 0.0)) throw DomainError("cutoffs need t > 0");
    CutoffValues v;
    if (c.omega == 0) return v;
    v.defined = true;
    v.chi2 = chi2_factor(c.xi - c.kappa - c.eta, c.t, c.omega) * chi2_factor(c.xi, c.t, c.omega);
    v.chi1 = 1.0 - v.chi2;
    v.region = v.chi2 == 1.0 ? Region::omega2 : (v.chi2 == 0.0 ? Region::omega1 : Region::shoulder);
    return v;
}

namespace {

ProfileField physical(const ProfileField& f) {
    return f.representation() == Representation::physical ? f : transform_x(f, Direction::inverse);
}

ProfileField pull(const ProfileField& V, double direction) {
    const double t = V.time();
    ProfileField y = apply_torus_multiplier(physical(V), [&](long k2) {
        return std::polar(1.0, direction * 0.5 * t * static_cast<double>(k2));
    });
    return apply_line_multiplier(y, [&](double z) { return std::polar(1.0, -direction * z * z / (2.0 * t)); });
}

void check_inputs(std::initializer_list<const ProfileField*> fs, const ResonanceTable& table,
                  std::size_t max_points) {
    const ProfileField* first = *fs.begin();
    if (table.scope() != TableScope::full) throw DomainError("lattice sums need a full resonance table");
    for (const ProfileField* f : fs) {
        if (!f->same_shape(*first)) throw ShapeError("diagnostic fields differ in shape");
        if (std::abs(f->time() - first->time()) > 1e-12 * first->time())
            throw DomainError("diagnostic fields differ in time");
        if (f->spectrum().dimension() != table.dimension() || f->spectrum().cutoff() != table.cutoff())
            throw ShapeError("field spectrum does not match the resonance table");
    }
    if (first->points() > max_points)
        throw ResourceError("frequency double sum exceeds the configured grid cap");
}

// Q^(xi, k) = t^{-1} N^{-1} sum_{omega != 0} sum_{Gamma_omega(k)} sum_{kappa, eta}
//   weight(omega, xi, zeta) f1^(kappa, k1) b2^(zeta, k2) f3^(eta, k3),
// zeta = xi - kappa - eta (mod N), b2 = DFT of conj(f2). The kappa/eta sum is regrouped as
// sum_zeta b2(zeta) C(xi - zeta) with C the cyclic convolution of f1^ and f3^.
template <class Weight>
ProfileField lattice_sum(const ProfileField& f1, const ProfileField& f2, const ProfileField& f3,
                         const ResonanceTable& table, Weight&& weight) {
    const std::size_t N = f1.points(), nm = f1.modes();
    const double t = f1.time();
    const ProfileField F1 = transform_x(physical(f1), Direction::forward);
    const ProfileField F3 = transform_x(physical(f3), Direction::forward);
    ProfileField c2 = physical(f2);
    for (auto& z : c2.data()) z = std::conj(z);
    const ProfileField B = transform_x(c2, Direction::forward);

    std::map<std::uint64_t, std::vector<cplx>> conv;
    auto convolution = [&](std::int32_t a, std::int32_t c) -> const std::vector<cplx>& {
        const std::uint64_t key = static_cast<std::uint64_t>(a) * nm + static_cast<std::uint64_t>(c);
        auto it = conv.find(key);
        if (it != conv.end()) return it->second;
        std::vector<cplx> r(N);
        for (std::size_t mu = 0; mu < N; ++mu) {
            cplx s{};
            for (std::size_t k = 0; k < N; ++k) s += F1(k, a) * F3((mu + N - k) % N, c);
            r[mu] = s;
        }
        return conv.emplace(key, std::move(r)).first->second;
    };

    std::map<std::int64_t, std::vector<cplx>> wcache;
    auto weights = [&](std::int64_t om) -> const std::vector<cplx>& {
        auto it = wcache.find(om);
        if (it != wcache.end()) return it->second;
        std::vector<cplx> w(N * N);
        for (std::size_t xi = 0; xi < N; ++xi)
            for (std::size_t ze = 0; ze < N; ++ze) w[xi * N + ze] = weight(om, xi, ze);
        return wcache.emplace(om, std::move(w)).first->second;
    };

    ProfileField Q(f1.grid(), f1.spectrum(), t, Representation::spectral);
    const double pre = 1.0 / (t * static_cast<double>(N));
    for (std::size_t k = 0; k < nm; ++k) {
        const auto tup = table.tuples(k);
        for (const LevelGroup& g : table.groups(k)) {
            if (g.omega == 0) continue;
            const std::vector<cplx>& w = weights(g.omega);
            for (std::uint64_t i = g.begin; i < g.end; ++i) {
                const FrequencyTuple& q = tup[i];
                const std::vector<cplx>& C = convolution(q.k1, q.k3);
                for (std::size_t xi = 0; xi < N; ++xi) {
                    cplx s{};
                    const cplx* wr = &w[xi * N];
                    for (std::size_t ze = 0; ze < N; ++ze)
                        s += wr[ze] * B(ze, q.k2) * C[(xi + N - ze) % N];
                    Q(xi, k) += pre * s;
                }
            }
        }
    }
    return Q;
}

}  // namespace

ProfileField pullback_S(const ProfileField& V) { return pull(V, 1.0); }
ProfileField pushforward_S(const ProfileField& Z) { return pull(Z, -1.0); }

ETerms decompose_e_terms(const ProfileField& w_in, const ProfileField& g_in, const ProfileField& V_in,
                         const ResonanceTable& table, std::size_t max_points) {
    check_inputs({&w_in, &g_in, &V_in}, table, max_points);
    const ProfileField w = physical(w_in), gamma = physical(g_in), V = physical(V_in);
    const double t = w.time();
    const std::size_t N = w.points(), nm = w.modes();
    auto cubic = [&](const ProfileField& a, const ProfileField& c) {
        ProfileField out = a.zeros_like();
        torus_cubic(a.spectrum(), a.points(), a.data().data(), V.data().data(), c.data().data(),
                    out.data().data());
        return out;
    };
    ETerms r;
    r.target = pullback_S(cubic(w, w));
    r.target *= 1.0 / t;
    r.e1 = pullback_S(cubic(w, w) - cubic(gamma, gamma));
    r.e1 *= 1.0 / t;

    ProfileField res = w.zeros_like();
    for (std::size_t j = 0; j < N; ++j)
        resonant_form_R(gamma.column(j), V.column(j), gamma.column(j), res.column(j), table);
    r.e2 = pullback_S(res);
    r.e2 *= 1.0 / t;

    const ProfileField G = interaction_picture(gamma);
    const ProfileField Z = pullback_S(V);
    const LineGrid& grid = w.grid();
    std::vector<cplx> phase(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double f = grid.frequency(j);
        phase[j] = std::polar(1.0, -f * f / (2.0 * t));
    }
    auto base = [&](std::int64_t om, std::size_t xi, std::size_t ze) {
        return std::polar(1.0, -0.5 * static_cast<double>(om) * t) * phase[xi] * phase[ze];
    };
    auto chi2 = [&](std::int64_t om, std::size_t xi, std::size_t ze) {
        return chi2_factor(grid.frequency(ze), t, om) * chi2_factor(grid.frequency(xi), t, om);
    };
    ProfileField q3 = lattice_sum(G, Z, G, table, [&](std::int64_t om, std::size_t xi, std::size_t ze) {
        return (1.0 - chi2(om, xi, ze)) * base(om, xi, ze);
    });
    ProfileField q4 = lattice_sum(G, Z, G, table, [&](std::int64_t om, std::size_t xi, std::size_t ze) {
        return chi2(om, xi, ze) * base(om, xi, ze);
    });
    r.e3 = transform_x(q3, Direction::inverse);
    r.e4 = transform_x(q4, Direction::inverse);
    (void)nm;
    ProfileField sum = r.e1 + r.e2 + r.e3 + r.e4;
    r.sum_check = norm(sum - r.target, NormKind::L2);
    return r;
}

O1Value quadrilinear_O1(const ProfileField& f1, const ProfileField& f2, const ProfileField& f3,
                        const ProfileField& f4, double t, const ResonanceTable& table,
                        std::size_t max_points) {
    check_inputs({&f1, &f2, &f3, &f4}, table, max_points);
    if (std::abs(f1.time() - t) > 1e-12 * t) throw DomainError("O1 time does not match the fields");
    const LineGrid& grid = f1.grid();
    O1Value out;
    std::map<std::int64_t, std::size_t> excluded_per_level;
    ProfileField Q = lattice_sum(f1, f2, f3, table, [&](std::int64_t om, std::size_t xi, std::size_t ze) {
        const double x = grid.frequency(xi), z = grid.frequency(ze);
        // kappa + eta = xi - zeta: Psi depends on the frequencies only through xi and zeta.
        const PhaseValues p = phase_psi({t, x, x - z, 0.0, om});
        const double c1 = 1.0 - chi2_factor(z, t, om) * chi2_factor(x, t, om);
        if (c1 == 0.0) return cplx{};
        if (std::abs(p.dpsi) < 1e-12) {
            ++excluded_per_level[om];
            return cplx{};
        }
        return c1 * std::polar(1.0, -p.psi) / cplx(0.0, -p.dpsi);
    });
    // Each excluded lattice point is skipped once per tuple at that level.
    for (std::size_t k = 0; k < table.mode_count(); ++k)
        for (const LevelGroup& g : table.groups(k))
            if (auto it = excluded_per_level.find(g.omega); it != excluded_per_level.end())
                out.excluded += it->second * (g.end - g.begin);
    const ProfileField F4 = transform_x(physical(f4), Direction::forward);
    out.value = inner(F4, Q);
    return out;
}

}  // namespace rnls
