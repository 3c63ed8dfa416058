#include "rnls/profile.hpp"

#include <cmath>
#include <numbers>

#include "rnls/cutoff.hpp"

namespace rnls {
namespace {

ProfileField physical(const ProfileField& f) {
    return f.representation() == Representation::physical ? f : transform_x(f, Direction::inverse);
}
ProductField physical(const ProductField& f) {
    return f.representation() == Representation::physical ? f : transform_x(f, Direction::inverse);
}

template <class Tag>
Field<Tag> half_laplacian_y(const Field<Tag>& f) {
    return apply_torus_multiplier(f, [](long k2) { return cplx(-0.5 * static_cast<double>(k2)); });
}

}  // namespace

ProfileField extract_w(const ProductField& u_in) {
    const double t = u_in.time();
    if (!(t >= 1.0)) throw DomainError("profile extraction needs t >= 1");
    const ProductField u = physical(u_in);
    ProfileField w(LineGrid(u.grid().half_width() / t, u.points()), u.spectrum(), t);
    const double amp = std::sqrt(t);
    for (std::size_t j = 0; j < u.points(); ++j) {
        const double x = u.grid().point(j);
        const cplx ph = amp * std::polar(1.0, -x * x / (2.0 * t));
        const cplx* a = u.column(j);
        cplx* b = w.column(j);
        for (std::size_t m = 0; m < u.modes(); ++m) b[m] = ph * a[m];
    }
    return w;
}

ProductField asymptotic_ansatz(const ProfileField& W_in) {
    const ProfileField W = physical(W_in);
    const double t = W.time();
    ProductField u(LineGrid(W.grid().half_width() * t, W.points()), W.spectrum(), t);
    const double amp = 1.0 / std::sqrt(t);
    for (std::size_t j = 0; j < W.points(); ++j) {
        const double x = u.grid().point(j);
        const cplx ph = amp * std::polar(1.0, x * x / (2.0 * t));
        const cplx* a = W.column(j);
        cplx* b = u.column(j);
        for (std::size_t m = 0; m < W.modes(); ++m) b[m] = ph * a[m];
    }
    return u;
}

ProfileField extract_gamma(const ProfileField& w) {
    return lp_project(w, LpKind::low, std::sqrt(w.time()));
}

ScatteringError scattering_error(const ProductField& u, const ProfileField& W, double alpha) {
    const ProfileField w = extract_w(u);
    if (!w.same_shape(W)) throw ShapeError("profile does not live on the extraction grid of u");
    ProfileField d = w - physical(W);
    ScatteringError e;
    e.l2 = norm(d, NormKind::L2);
    e.linf_h_alpha = linf_h_alpha(d, alpha) / std::sqrt(u.time());
    return e;
}

ScatteringError scattering_error(const ProductField& u, const ProfileField& W) {
    return scattering_error(u, W, NormParams::defaults(u.spectrum().dimension()).alpha);
}

namespace {

struct GammaTerms {
    ProfileField I1, I2, I3;
};

GammaTerms gamma_terms(const ProfileField& w, const ProfileField& g, double sign) {
    const double t = w.time();
    const double rt = std::sqrt(t);
    GammaTerms r;
    r.I1 = apply_line_multiplier(w, [&](double xi) {
        const double c = SmoothCutoff::value(xi / rt), dc = SmoothCutoff::derivative(xi / rt);
        return cplx(xi * xi * c / (2.0 * t * t), -xi * dc / (2.0 * t * rt));
    });
    ProfileField cw = cubic_term(w), cg = cubic_term(g);
    ProfileField diff = cw - cg;
    r.I2 = lp_project(diff, LpKind::low, rt);
    r.I2 *= sign / t;
    r.I3 = cg - lp_project(cg, LpKind::low, rt);
    r.I3 *= -sign / t;
    return r;
}

}  // namespace

GammaResidual gamma_residual(const ProductField& u, const ProfileField& w_in,
                             const ProfileField& gamma_in, const ProductField* u_minus,
                             const ProductField* u_plus, double h, double sign) {
    const ProfileField w = physical(w_in), gamma = physical(gamma_in);
    if (!w.same_shape(gamma)) throw ShapeError("w and gamma differ in shape");
    if (std::abs(u.time() - w.time()) > 1e-12 * w.time()) throw DomainError("u and w times differ");
    GammaTerms terms = gamma_terms(w, gamma, sign);
    GammaResidual r;
    r.I = terms.I1 + terms.I2 + terms.I3;
    r.I1 = std::move(terms.I1);
    r.I2 = std::move(terms.I2);
    r.I3 = std::move(terms.I3);
    if (u_minus && u_plus && h > 0.0) {
        const ProfileField gm = resample_profile(extract_gamma(extract_w(*u_minus)), gamma.grid());
        const ProfileField gp = resample_profile(extract_gamma(extract_w(*u_plus)), gamma.grid());
        ProfileField lhs = gp - gm;
        lhs *= cplx(0.0, 1.0 / (2.0 * h));
        lhs += half_laplacian_y(gamma);
        ProfileField cg = cubic_term(gamma);
        cg *= sign / gamma.time();
        lhs -= cg;
        lhs -= r.I;
        r.fd_checked = true;
        r.fd_defect = norm(lhs, NormKind::L2);
    }
    return r;
}

ProductField build_u_app(const ProfileField& W, double t) {
    if (!(t >= 1.0)) throw DomainError("u_app is defined for t >= 1");
    if (std::abs(W.time() - t) > 1e-12 * t) throw DomainError("profile time does not match t");
    return asymptotic_ansatz(extract_gamma(physical(W)));
}

AppResidual u_app_residuals(const ProfileField& W_in, double t, double sign) {
    if (!(t >= 1.0)) throw DomainError("u_app is defined for t >= 1");
    const ProfileField W = physical(W_in);
    const double rt = std::sqrt(t);
    ProfileField p1 = apply_line_multiplier(W, [&](double xi) {
        const double c = SmoothCutoff::value(xi / rt), dc = SmoothCutoff::derivative(xi / rt);
        return cplx(-xi * xi * c / (2.0 * t), -xi * dc / (2.0 * rt));
    });
    const ProfileField G = extract_gamma(W);
    ProfileField cW = cubic_term(W), cG = cubic_term(G);
    ProfileField p2 = lp_project(cW - cG, LpKind::low, rt);
    p2 *= sign;
    ProfileField p3 = cG - lp_project(cG, LpKind::low, rt);
    p3 *= -sign;
    AppResidual r;
    r.I1 = asymptotic_ansatz(p1);
    r.I2 = asymptotic_ansatz(p2);
    r.I3 = asymptotic_ansatz(p3);
    r.I1 *= 1.0 / t;
    r.I2 *= 1.0 / t;
    r.I3 *= 1.0 / t;
    return r;
}

ProfileField resample_profile(const ProfileField& W_in, const LineGrid& target) {
    const ProfileField W = physical(W_in);
    if (W.grid() == target) return W;
    const ProfileField S = transform_x(W, Direction::forward);
    ProfileField out(target, W.spectrum(), W.time());
    const std::size_t N = W.points(), nm = W.modes();
    const double Lv = W.grid().half_width();
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    std::vector<cplx> e(N);
    for (std::size_t i = 0; i < target.count(); ++i) {
        const double v = target.point(i);
        cplx* o = out.column(i);
        if (v < -Lv || v >= Lv) continue;
        const double theta = std::numbers::pi * (v + Lv) / Lv;
        for (std::size_t j = 0; j < N; ++j) {
            const long m = j < N / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(N);
            e[j] = j == N / 2 ? cplx(std::cos(theta * static_cast<double>(N / 2)))
                              : std::polar(1.0, theta * static_cast<double>(m));
        }
        for (std::size_t j = 0; j < N; ++j) {
            const cplx* s = S.column(j);
            const cplx ej = e[j] * scale;
            for (std::size_t m = 0; m < nm; ++m) o[m] += ej * s[m];
        }
    }
    return out;
}

SingleModeProfile::SingleModeProfile(TorusSpectrum spectrum, TorusSpectrum::Mode k0, cplx amplitude,
                                     double sigma, double v0, double t1, double sign)
    : spectrum_(spectrum), a_(amplitude), sigma_(sigma), v0_(v0), t1_(t1), sign_(sign) {
    mode_ = spectrum_.index(k0);
    if (mode_ == spectrum_.mode_count()) throw DomainError("profile mode lies outside the cutoff");
    if (!(sigma > 0.0) || !(t1 > 0.0)) throw DomainError("profile width and start time must be positive");
}

ProfileField SingleModeProfile::at(double t, const LineGrid& vgrid) const {
    ProfileField W(vgrid, spectrum_, t);
    const double k2 = static_cast<double>(spectrum_.norm2(mode_));
    for (std::size_t j = 0; j < vgrid.count(); ++j) {
        const double v = vgrid.point(j);
        const cplx c = a_ * std::exp(-(v - v0_) * (v - v0_) / (2.0 * sigma_ * sigma_));
        W(j, mode_) = c * std::polar(1.0, -0.5 * k2 * (t - t1_) - sign_ * std::norm(c) * std::log(t / t1_));
    }
    return W;
}

SampledProfile::SampledProfile(const ProfileField& W_start, double T_end, double dt,
                               std::size_t stride, double sign)
    : dt_(dt), sign_(sign) {
    if (!(dt > 0.0) || stride == 0) throw DomainError("sampled profile needs dt > 0 and stride >= 1");
    StepOptions opt;
    opt.sign = sign;
    ProfileField W = physical(W_start);
    checkpoints_.push_back(W);
    const double t0 = W.time();
    const auto steps = static_cast<std::size_t>(std::ceil((T_end - t0) / dt - 1e-9));
    for (std::size_t n = 1; n <= steps; ++n) {
        opt.step_index = n;
        W = step_asymptotic(W, dt, opt);
        W.set_time(t0 + dt * static_cast<double>(n));
        if (n % stride == 0) checkpoints_.push_back(W);
    }
    if (steps % stride != 0) checkpoints_.push_back(W);
}

ProfileField SampledProfile::native(double t) const {
    std::size_t i = 0;
    while (i + 1 < checkpoints_.size() && checkpoints_[i + 1].time() <= t + 1e-12) ++i;
    ProfileField W = checkpoints_[i];
    StepOptions opt;
    opt.sign = sign_;
    while (t - W.time() > 1e-12) {
        const double h = std::min(dt_, t - W.time());
        const double target = W.time() + h;
        W = step_asymptotic(W, h, opt);
        W.set_time(target);
    }
    if (W.time() - t > 1e-9) throw DomainError("sampled profile queried before its start time");
    W.set_time(t);
    return W;
}

ProfileField SampledProfile::at(double t, const LineGrid& vgrid) const {
    return resample_profile(native(t), vgrid);
}

double u_app_fd_defect(const ProfileSource& src, const LineGrid& xgrid, double t, double h) {
    auto uapp = [&](double s) {
        const LineGrid vg(xgrid.half_width() / s, xgrid.count());
        ProductField u = build_u_app(src.at(s, vg), s);
        return u;
    };
    const ProductField um = uapp(t - h), u0 = uapp(t), up = uapp(t + h);
    if (!(um.grid().count() == u0.grid().count())) throw ShapeError("grid mismatch");
    ProductField lhs = u0.zeros_like();
    for (std::size_t i = 0; i < lhs.size(); ++i)
        lhs.data()[i] = cplx(0.0, 1.0 / (2.0 * h)) * (up.data()[i] - um.data()[i]);
    lhs += apply_line_multiplier(u0, [](double xi) { return cplx(-0.5 * xi * xi); });
    lhs += half_laplacian_y(u0);
    ProductField c = cubic_term(u0);
    c *= src.sign();
    lhs -= c;
    const LineGrid vg(xgrid.half_width() / t, xgrid.count());
    lhs -= u_app_residuals(src.at(t, vg), t, src.sign()).sum();
    return norm(lhs, NormKind::L2);
}

}  // namespace rnls
