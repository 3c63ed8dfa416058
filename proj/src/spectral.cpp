#include "rnls/spectral.hpp"

#include <cmath>
#include <numbers>

#include "rnls/fft.hpp"

namespace rnls {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double torus_volume(int d) { return std::pow(two_pi, d); }

template <class Tag>
Field<Tag> to_rep(const Field<Tag>& f, Representation r) {
    if (f.representation() == r) return f;
    return transform_x(f, r == Representation::spectral ? Direction::forward : Direction::inverse);
}

template <class Tag, class Fn>
Field<Tag> line_multiplier(const Field<Tag>& f, Fn&& mult) {
    const Representation original = f.representation();
    Field<Tag> g = to_rep(f, Representation::spectral);
    const std::size_t nm = g.modes();
    for (std::size_t j = 0; j < g.points(); ++j) {
        const cplx a = mult(g.grid().frequency(j));
        cplx* col = g.column(j);
        for (std::size_t m = 0; m < nm; ++m) col[m] *= a;
    }
    return to_rep(g, original);
}

}  // namespace

template <class Tag>
Field<Tag> transform_x(const Field<Tag>& f, Direction dir) {
    const bool fwd = dir == Direction::forward;
    if (fwd && f.representation() != Representation::physical)
        throw RepresentationError("forward transform needs a line-physical field");
    if (!fwd && f.representation() != Representation::spectral)
        throw RepresentationError("inverse transform needs a line-spectral field");
    Field<Tag> g = f;
    fft_line(g.data().data(), g.points(), g.modes(), fwd ? -1 : +1);
    g.set_representation(fwd ? Representation::spectral : Representation::physical);
    return g;
}

template <class Tag>
Field<Tag> lp_project(const Field<Tag>& f, LpKind kind, double N) {
    if (!(N > 0.0)) throw DomainError("projection threshold must be positive");
    return line_multiplier(f, [&](double xi) { return cplx(lp_multiplier(kind, xi, N)); });
}

template <class Tag>
Field<Tag> frac_derivative(const Field<Tag>& f, double s, Axis axis, bool homogeneous) {
    if (!(s >= 0.0)) throw DomainError("derivative order must be nonnegative");
    auto weight = [&](double n2) {
        if (homogeneous) return n2 == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(n2, s / 2.0);
        return std::pow(1.0 + n2, s / 2.0);
    };
    if (axis == Axis::line)
        return line_multiplier(f, [&](double xi) { return cplx(weight(xi * xi)); });
    Field<Tag> g = f;
    const std::size_t nm = g.modes();
    std::vector<double> w(nm);
    for (std::size_t m = 0; m < nm; ++m) w[m] = weight(static_cast<double>(f.spectrum().norm2(m)));
    for (std::size_t j = 0; j < g.points(); ++j) {
        cplx* col = g.column(j);
        for (std::size_t m = 0; m < nm; ++m) col[m] *= w[m];
    }
    return g;
}

template <class Tag>
Field<Tag> line_derivative(const Field<Tag>& f) {
    const double nyq = f.grid().frequency(f.points() / 2);
    return line_multiplier(f, [&](double xi) {
        return xi == nyq ? cplx{} : cplx(0.0, xi);
    });
}

ProductField linear_propagator(const ProductField& u, double dt) {
    const Representation original = u.representation();
    ProductField g = to_rep(u, Representation::spectral);
    const std::size_t nm = g.modes();
    std::vector<double> k2(nm);
    for (std::size_t m = 0; m < nm; ++m) k2[m] = static_cast<double>(u.spectrum().norm2(m));
    for (std::size_t j = 0; j < g.points(); ++j) {
        const double xi = g.grid().frequency(j);
        cplx* col = g.column(j);
        for (std::size_t m = 0; m < nm; ++m)
            col[m] *= std::polar(1.0, -0.5 * dt * (xi * xi + k2[m]));
    }
    g = to_rep(g, original);
    g.set_time(u.time() + dt);
    return g;
}

template <class Tag>
Field<Tag> torus_propagator(const Field<Tag>& f, double dt) {
    Field<Tag> g = f;
    const std::size_t nm = g.modes();
    std::vector<cplx> ph(nm);
    for (std::size_t m = 0; m < nm; ++m)
        ph[m] = std::polar(1.0, -0.5 * dt * static_cast<double>(f.spectrum().norm2(m)));
    for (std::size_t j = 0; j < g.points(); ++j) {
        cplx* col = g.column(j);
        for (std::size_t m = 0; m < nm; ++m) col[m] *= ph[m];
    }
    return g;
}

template <class Tag>
Field<Tag> multiply_coordinate(const Field<Tag>& f) {
    Field<Tag> g = to_rep(f, Representation::physical);
    for (std::size_t j = 0; j < g.points(); ++j) {
        const double x = g.grid().point(j);
        cplx* col = g.column(j);
        for (std::size_t m = 0; m < g.modes(); ++m) col[m] *= x;
    }
    return to_rep(g, f.representation());
}

ProductField vector_field_Lx(const ProductField& u) {
    ProductField xu = multiply_coordinate(u);
    if (u.time() == 0.0) return xu;
    ProductField du = line_derivative(u);
    du *= cplx(0.0, u.time());
    return xu + du;
}

template <class Tag>
cplx inner(const Field<Tag>& a, const Field<Tag>& b) {
    if (!a.same_shape(b)) throw ShapeError("inner product of mismatched fields");
    if (a.representation() != b.representation())
        throw RepresentationError("inner product of mismatched representations");
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
    return s * a.grid().spacing() * torus_volume(a.spectrum().dimension());
}

template <class Tag>
void require_finite(const Field<Tag>& f, const char* what) {
    for (const cplx& z : f.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ComputationError(std::string("non-finite value in ") + what);
}

template <class Tag>
double linf_h_alpha(const Field<Tag>& f, double alpha) {
    Field<Tag> g = to_rep(f, Representation::physical);
    const std::size_t nm = g.modes();
    std::vector<double> w(nm);
    for (std::size_t m = 0; m < nm; ++m)
        w[m] = std::pow(1.0 + static_cast<double>(g.spectrum().norm2(m)), alpha);
    double best = 0.0;
    for (std::size_t j = 0; j < g.points(); ++j) {
        const cplx* col = g.column(j);
        double s = 0.0;
        for (std::size_t m = 0; m < nm; ++m) s += w[m] * std::norm(col[m]);
        best = std::max(best, s);
    }
    return std::sqrt(best * torus_volume(g.spectrum().dimension()));
}

template <class Tag>
double norm(const Field<Tag>& f, NormKind which, const NormParams& p) {
    require_finite(f, "norm argument");
    auto l2 = [](const Field<Tag>& g) {
        double s = 0.0;
        for (const cplx& z : g.data()) s += std::norm(z);
        return std::sqrt(s * g.grid().spacing() * torus_volume(g.spectrum().dimension()));
    };
    switch (which) {
    case NormKind::L2: return l2(f);
    case NormKind::LinfxHay: return linf_h_alpha(f, p.alpha);
    case NormKind::H01x: {
        const double a = l2(f), b = l2(multiply_coordinate(f));
        return std::sqrt(a * a + b * b);
    }
    case NormKind::Xplus: {
        if constexpr (std::is_same_v<Tag, ProductTag>) {
            const double a = l2(vector_field_Lx(to_rep(f, Representation::physical)));
            const double b = l2(frac_derivative(f, p.s, Axis::y, false));
            return std::sqrt(a * a + b * b);
        } else {
            throw DomainError("the X+ norm is defined for product fields");
        }
    }
    case NormKind::Y: return linf_h_alpha(f, p.alpha) + l2(f);
    }
    return 0.0;
}

template <class Tag>
std::vector<cplx> torus_values(const Field<Tag>& f) {
    Field<Tag> g = to_rep(f, Representation::physical);
    TorusTransform tr(g.spectrum(), g.points());
    std::vector<cplx> v(tr.padded() * g.points());
    tr.to_physical(g.data().data(), v.data());
    return v;
}

template <class Tag>
double sup_abs(const Field<Tag>& f) {
    double best = 0.0;
    for (const cplx& z : torus_values(f)) best = std::max(best, std::abs(z));
    return best;
}

template <class Tag>
double boundary_mass_fraction(const Field<Tag>& f) {
    Field<Tag> g = to_rep(f, Representation::physical);
    const double L = g.grid().half_width();
    double total = 0.0, outer = 0.0;
    for (std::size_t j = 0; j < g.points(); ++j) {
        double s = 0.0;
        const cplx* col = g.column(j);
        for (std::size_t m = 0; m < g.modes(); ++m) s += std::norm(col[m]);
        total += s;
        if (std::abs(g.grid().point(j)) >= 0.9 * L) outer += s;
    }
    return total > 0.0 ? outer / total : 0.0;
}

template <class Tag>
Field<Tag> apply_line_multiplier(const Field<Tag>& f, const std::function<cplx(double)>& m) {
    return line_multiplier(f, m);
}

template <class Tag>
Field<Tag> apply_torus_multiplier(const Field<Tag>& f, const std::function<cplx(long)>& mult) {
    Field<Tag> g = f;
    const std::size_t nm = g.modes();
    std::vector<cplx> w(nm);
    for (std::size_t m = 0; m < nm; ++m) w[m] = mult(f.spectrum().norm2(m));
    for (std::size_t j = 0; j < g.points(); ++j) {
        cplx* col = g.column(j);
        for (std::size_t m = 0; m < nm; ++m) col[m] *= w[m];
    }
    return g;
}

#define RNLS_INSTANTIATE(Tag)                                                             \
    template Field<Tag> transform_x(const Field<Tag>&, Direction);                        \
    template Field<Tag> lp_project(const Field<Tag>&, LpKind, double);                    \
    template Field<Tag> frac_derivative(const Field<Tag>&, double, Axis, bool);           \
    template Field<Tag> line_derivative(const Field<Tag>&);                               \
    template Field<Tag> torus_propagator(const Field<Tag>&, double);                      \
    template Field<Tag> multiply_coordinate(const Field<Tag>&);                           \
    template double norm(const Field<Tag>&, NormKind, const NormParams&);                 \
    template double linf_h_alpha(const Field<Tag>&, double);                              \
    template cplx inner(const Field<Tag>&, const Field<Tag>&);                            \
    template std::vector<cplx> torus_values(const Field<Tag>&);                           \
    template double sup_abs(const Field<Tag>&);                                           \
    template double boundary_mass_fraction(const Field<Tag>&);                            \
    template void require_finite(const Field<Tag>&, const char*);                        \
    template Field<Tag> apply_line_multiplier(const Field<Tag>&,                          \
                                              const std::function<cplx(double)>&);        \
    template Field<Tag> apply_torus_multiplier(const Field<Tag>&,                         \
                                               const std::function<cplx(long)>&);

RNLS_INSTANTIATE(ProductTag)
RNLS_INSTANTIATE(ProfileTag)

}  // namespace rnls
