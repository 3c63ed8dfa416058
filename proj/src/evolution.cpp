#include "rnls/evolution.hpp"

#include <cmath>
#include <numbers>

#include "rnls/fft.hpp"
#include "rnls/spectral.hpp"

namespace rnls {
namespace {

double sq_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return s;
}

template <class Tag>
void check_step(const Field<Tag>& f, const StepOptions& opt, const char* what) {
    for (const cplx& z : f.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InstabilityError(std::string("non-finite state after ") + what, opt.step_index);
}

// Implicit midpoint rule for i u' = N(u) over a step h:
// m = u0 - i (h/2) N(m), u1 = 2m - u0. Iterates until the increment stops
// shrinking or drops below the tolerance.
template <class Tag, class Rhs>
Field<Tag> midpoint_solve(const Field<Tag>& u0, double h, Rhs&& rhs, const StepOptions& opt,
                          Field<Tag>* midpoint = nullptr) {
    Field<Tag> m = u0;
    const cplx c(0.0, -0.5 * h);
    double prev = INFINITY;
    const double scale = std::sqrt(sq_norm(u0.data()));
    for (int it = 0; it < opt.max_iterations; ++it) {
        Field<Tag> n = rhs(m);
        double inc = 0.0;
        auto& md = m.data();
        const auto& u0d = u0.data();
        const auto& nd = n.data();
        for (std::size_t i = 0; i < md.size(); ++i) {
            const cplx next = u0d[i] + c * nd[i];
            inc += std::norm(next - md[i]);
            md[i] = next;
        }
        inc = std::sqrt(inc);
        if (!std::isfinite(inc)) throw InstabilityError("midpoint iteration diverged", opt.step_index);
        if (inc <= opt.tolerance * scale) break;
        if (it >= 2 && inc >= prev) {
            // Stagnation at roundoff is convergence; anything larger is a
            // step too long for the fixed-point map to contract.
            if (inc > 1e-10 * std::max(scale, 1e-300))
                throw InstabilityError("midpoint iteration does not contract", opt.step_index);
            break;
        }
        prev = inc;
    }
    Field<Tag> u1 = u0;
    for (std::size_t i = 0; i < u1.size(); ++i) u1.data()[i] = 2.0 * m.data()[i] - u0.data()[i];
    if (midpoint) *midpoint = std::move(m);
    return u1;
}

template <class Tag>
Field<Tag> linearized_term(const Field<Tag>& u, const Field<Tag>& nu) {
    TorusTransform tr(u.spectrum(), u.points());
    const std::size_t n = tr.padded() * u.points();
    std::vector<cplx> pu(n), pn(n);
    tr.to_physical(u.data().data(), pu.data());
    tr.to_physical(nu.data().data(), pn.data());
    for (std::size_t i = 0; i < n; ++i)
        pn[i] = 2.0 * std::norm(pu[i]) * pn[i] - pu[i] * pu[i] * std::conj(pn[i]);
    Field<Tag> out = nu.zeros_like();
    tr.to_coefficients(pn.data(), out.data().data());
    return out;
}

ProductField nonlinear_substep(const ProductField& u, double dt, const StepOptions& opt,
                               ProductField* midpoint) {
    return midpoint_solve(
        u, dt,
        [&](const ProductField& m) {
            ProductField n = cubic_term(m);
            if (opt.sign != 1.0) n *= opt.sign;
            return n;
        },
        opt, midpoint);
}

}  // namespace

template <class Tag>
Field<Tag> cubic_term(const Field<Tag>& u) {
    if (u.representation() != Representation::physical)
        throw RepresentationError("cubic term needs a line-physical field");
    Field<Tag> out = u.zeros_like();
    torus_cubic(u.spectrum(), u.points(), u.data().data(), out.data().data());
    return out;
}
template ProductField cubic_term(const ProductField&);
template ProfileField cubic_term(const ProfileField&);

ProductField step_full_nls(const ProductField& u, double dt, const StepOptions& opt) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (u.representation() != Representation::physical)
        throw RepresentationError("step_full_nls needs a line-physical field");
    ProductField a = linear_propagator(u, 0.5 * dt);
    ProductField b = nonlinear_substep(a, dt, opt, nullptr);
    ProductField c = linear_propagator(b, 0.5 * dt);
    check_step(c, opt, "full NLS step");
    return c;
}

std::pair<ProductField, ProductField> step_coupled(const ProductField& u, const ProductField& nu,
                                                   double dt, const StepOptions& opt) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (!u.same_shape(nu)) throw ShapeError("linearized step needs matching discretizations");
    if (std::abs(u.time() - nu.time()) > 1e-12 * std::max(1.0, std::abs(u.time())))
        throw DomainError("linearized step needs u and nu at the same time");
    ProductField ua = linear_propagator(u, 0.5 * dt);
    ProductField na = linear_propagator(nu, 0.5 * dt);
    ProductField um;
    ProductField ub = nonlinear_substep(ua, dt, opt, &um);
    ProductField nb = midpoint_solve(
        na, dt,
        [&](const ProductField& mu) {
            ProductField n = linearized_term(um, mu);
            if (opt.sign != 1.0) n *= opt.sign;
            return n;
        },
        opt);
    ProductField uc = linear_propagator(ub, 0.5 * dt);
    ProductField nc = linear_propagator(nb, 0.5 * dt);
    check_step(uc, opt, "linearized step");
    check_step(nc, opt, "linearized step");
    return {std::move(uc), std::move(nc)};
}

ProductField step_linearized(const ProductField& nu, const ProductField& u, double dt,
                             const StepOptions& opt) {
    return step_coupled(u, nu, dt, opt).second;
}

ProfileField step_resonant(const ProfileField& G, double tau_dt, const ResonanceTable& table) {
    if (G.spectrum().dimension() != table.dimension() || G.spectrum().cutoff() != table.cutoff())
        throw ShapeError("profile spectrum does not match the resonance table");
    if (G.representation() != Representation::physical)
        throw RepresentationError("step_resonant needs a v-physical profile");
    const std::size_t nm = G.modes();
    ProfileField out = G;
    std::vector<cplx> k1(nm), k2(nm), k3(nm), k4(nm), tmp(nm);
    auto rhs = [&](const cplx* g, cplx* r) {
        resonant_form_R(g, g, g, r, table);
        for (std::size_t m = 0; m < nm; ++m) r[m] *= cplx(0.0, -1.0);
    };
    const double h = tau_dt;
    for (std::size_t j = 0; j < G.points(); ++j) {
        const cplx* g = G.column(j);
        rhs(g, k1.data());
        for (std::size_t m = 0; m < nm; ++m) tmp[m] = g[m] + 0.5 * h * k1[m];
        rhs(tmp.data(), k2.data());
        for (std::size_t m = 0; m < nm; ++m) tmp[m] = g[m] + 0.5 * h * k2[m];
        rhs(tmp.data(), k3.data());
        for (std::size_t m = 0; m < nm; ++m) tmp[m] = g[m] + h * k3[m];
        rhs(tmp.data(), k4.data());
        cplx* o = out.column(j);
        for (std::size_t m = 0; m < nm; ++m)
            o[m] = g[m] + (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    }
    out.set_time(G.time() * std::exp(tau_dt));
    StepOptions opt;
    check_step(out, opt, "resonant step");
    return out;
}

ProfileField step_asymptotic(const ProfileField& W, double dt, const StepOptions& opt) {
    const double t = W.time();
    if (!(t + dt > 0.0)) throw DomainError("asymptotic step would cross t = 0");
    if (W.representation() != Representation::physical)
        throw RepresentationError("step_asymptotic needs a v-physical profile");
    const double ds = std::log((t + dt) / t);
    ProfileField a = torus_propagator(W, 0.5 * dt);
    ProfileField b = midpoint_solve(
        a, ds,
        [&](const ProfileField& m) {
            ProfileField n = cubic_term(m);
            if (opt.sign != 1.0) n *= opt.sign;
            return n;
        },
        opt);
    ProfileField c = torus_propagator(b, 0.5 * dt);
    c.set_time(t + dt);
    check_step(c, opt, "asymptotic step");
    return c;
}

double mass(const ProductField& u) { return std::norm(norm(u, NormKind::L2)); }

double energy(const ProductField& u, double sign) {
    ProductField p = u.representation() == Representation::physical ? u : transform_x(u, Direction::inverse);
    ProductField s = transform_x(p, Direction::forward);
    const double vol = std::pow(2.0 * std::numbers::pi, u.spectrum().dimension());
    const double dx = u.grid().spacing();
    double kin = 0.0;
    for (std::size_t j = 0; j < s.points(); ++j) {
        const double xi = s.grid().frequency(j);
        for (std::size_t m = 0; m < s.modes(); ++m)
            kin += (xi * xi + static_cast<double>(s.spectrum().norm2(m))) * std::norm(s(j, m));
    }
    ProductField n = cubic_term(p);
    double quart = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) quart += (std::conj(p.data()[i]) * n.data()[i]).real();
    return 0.5 * dx * vol * (kin + sign * quart);
}

ProfileField interaction_picture(const ProfileField& W) {
    return torus_propagator(W, -W.time());
}

CorrectionResult correction_F(const std::vector<ProfileField>& trajectory, double t, double T_max,
                              const ResonanceTable& table) {
    if (trajectory.size() < 3) throw SamplingError("correction needs at least three samples");
    const double t0 = trajectory.front().time();
    const double h = trajectory[1].time() - t0;
    if (!(h > 0.0)) throw SamplingError("trajectory times must increase");
    for (std::size_t j = 0; j < trajectory.size(); ++j)
        if (std::abs(trajectory[j].time() - (t0 + h * j)) > 1e-9 * std::max(1.0, T_max))
            throw SamplingError("trajectory samples must be uniformly spaced");
    if (std::abs(trajectory.back().time() - T_max) > 1e-9 * std::max(1.0, T_max))
        throw SamplingError("trajectory must end at the horizon");
    const double pos = (t - t0) / h;
    const auto i0 = static_cast<std::size_t>(std::llround(pos));
    if (std::abs(pos - i0) > 1e-6 || i0 >= trajectory.size())
        throw SamplingError("evaluation time is not a sample time");
    const std::size_t intervals = trajectory.size() - 1 - i0;
    const ProfileField& ref = trajectory[i0];
    ProfileField F = ref.zeros_like();
    CorrectionResult res;
    res.samples = intervals + 1;
    if (intervals == 1) throw SamplingError("a single interval cannot be integrated by Simpson's rule");

    std::vector<double> w(intervals + 1, 0.0);
    if (intervals > 0) {
        const std::size_t simpson = intervals % 2 == 0 ? intervals : intervals - 3;
        for (std::size_t i = 0; i + 2 <= simpson; i += 2) {
            w[i] += h / 3.0;
            w[i + 1] += 4.0 * h / 3.0;
            w[i + 2] += h / 3.0;
        }
        if (simpson != intervals) {
            const std::size_t b = simpson;
            const double c = 3.0 * h / 8.0;
            w[b] += c;
            w[b + 1] += 3.0 * c;
            w[b + 2] += 3.0 * c;
            w[b + 3] += c;
        }
    }
    const std::size_t nm = ref.modes();
    std::vector<cplx> e(nm);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const ProfileField P = interaction_picture(trajectory[i0 + i]);
        if (!P.same_shape(ref)) throw ShapeError("trajectory samples differ in shape");
        const double sigma = P.time();
        const cplx coef = cplx(0.0, -1.0) * (w[i] / sigma);
        for (std::size_t j = 0; j < P.points(); ++j) {
            const cplx* p = P.column(j);
            weighted_form(p, p, p, e.data(), table, [sigma](std::int64_t om) {
                return om == 0 ? cplx{} : std::polar(1.0, -0.5 * static_cast<double>(om) * sigma);
            });
            cplx* f = F.column(j);
            for (std::size_t m = 0; m < nm; ++m) f[m] += coef * e[m];
        }
    }
    {
        const ProfileField P = interaction_picture(trajectory.back());
        ProfileField tail = P.zeros_like();
        const double T = P.time();
        for (std::size_t j = 0; j < P.points(); ++j) {
            const cplx* p = P.column(j);
            weighted_form(p, p, p, tail.column(j), table, [T](std::int64_t om) {
                if (om == 0) return cplx{};
                const double o = static_cast<double>(om);
                return -2.0 / (o * T) * std::polar(1.0, -0.5 * o * T);
            });
        }
        res.tail_estimate = norm(tail, NormKind::L2);
    }
    res.F = std::move(F);
    return res;
}

ProductField evolve_nls(ProductField u, double dt, std::size_t steps,
                        const std::function<bool(std::size_t, const ProductField&)>& callback,
                        const StepOptions& opt) {
    StepOptions o = opt;
    for (std::size_t n = 0; n < steps; ++n) {
        o.step_index = n + 1;
        u = step_full_nls(u, dt, o);
        if (callback && !callback(n + 1, u)) break;
    }
    return u;
}

}  // namespace rnls
