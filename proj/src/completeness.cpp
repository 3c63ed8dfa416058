#include "rnls/completeness.hpp"

#include <array>
#include <cmath>

namespace rnls {

std::vector<double> completeness_nodes(const CompletenessOptions& opt) {
    if (!(opt.T_min >= 1.0) || !(opt.T_max > opt.T_min))
        throw DomainError("backward solve needs 1 <= T_min < T_max");
    if (!(opt.relative_step > 0.0) || !(opt.max_step > 0.0))
        throw DomainError("backward solve steps must be positive");
    std::vector<double> s{opt.T_min};
    for (;;) {
        const double t = s.back();
        const double h = std::min(opt.relative_step * t, opt.max_step);
        if (t + h >= opt.T_max - 0.5 * h) {
            s.push_back(opt.T_max);
            break;
        }
        s.push_back(t + h);
    }
    return s;
}

namespace {

// Integrals over [a, b] of the Lagrange basis on `nodes` (exact up to degree 3).
std::vector<double> lagrange_weights(const std::vector<double>& nodes, double a, double b) {
    static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    std::vector<double> w(nodes.size(), 0.0);
    for (int q = 0; q < 3; ++q) {
        const double s = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            double l = 1.0;
            for (std::size_t r = 0; r < nodes.size(); ++r)
                if (r != m) l *= (s - nodes[r]) / (nodes[m] - nodes[r]);
            w[m] += 0.5 * (b - a) * gw[q] * l;
        }
    }
    return w;
}

ProductField cubic_source(const ProductField& a, const ProductField& w) {
    ProductField full = cubic_term(a + w);
    return full - cubic_term(a);
}

}  // namespace

CompletenessReport solve_backward_completeness(const ProfileSource& W, const LineGrid& xgrid,
                                               const CompletenessOptions& opt) {
    const std::vector<double> s = completeness_nodes(opt);
    const std::size_t n = s.size();
    const TorusSpectrum sp = W.spectrum();
    const double bytes = 4.0 * static_cast<double>(n) * static_cast<double>(xgrid.count()) *
                         static_cast<double>(sp.mode_count()) * sizeof(cplx);
    if (bytes > opt.memory_ceiling_bytes)
        throw ResourceError("backward solve trajectory storage exceeds the memory ceiling");
    const double sign = W.sign();

    std::vector<ProductField> app(n), residual(n), wt(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const LineGrid vg(xgrid.half_width() / s[i], xgrid.count());
        const ProfileField Wi = W.at(s[i], vg);
        app[i] = build_u_app(Wi, s[i]);
        residual[i] = u_app_residuals(Wi, s[i], sign).sum();
        wt[i] = app[i].zeros_like();
    }

    // Interval weights are fixed by the nodes.
    std::vector<std::size_t> start(n - 1);
    std::vector<std::vector<double>> weights(n - 1);
    const std::size_t p = std::min<std::size_t>(4, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t st = i >= 1 ? i - 1 : 0;
        if (st + p > n) st = n - p;
        std::vector<double> nodes(s.begin() + static_cast<long>(st), s.begin() + static_cast<long>(st + p));
        start[i] = st;
        weights[i] = lagrange_weights(nodes, s[i], s[i + 1]);
    }

    CompletenessReport rep;
    rep.nodes = s;
    for (int it = 1; it <= opt.iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            ProductField src = cubic_source(app[i], wt[i]);
            if (sign != 1.0) src *= sign;
            src -= residual[i];
            g[i] = linear_propagator(src, -s[i]);
        }
        ProductField acc = app[0].zeros_like();
        double diff = 0.0, size = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            if (i + 1 < n) {
                const auto& w = weights[i];
                for (std::size_t m = 0; m < w.size(); ++m) {
                    const auto& gm = g[start[i] + m].data();
                    auto& ad = acc.data();
                    for (std::size_t q = 0; q < ad.size(); ++q) ad[q] += w[m] * gm[q];
                }
            }
            ProductField next = linear_propagator(acc, s[i]);
            next *= cplx(0.0, 1.0);
            next.set_time(s[i]);
            diff = std::max(diff, norm(next - wt[i], NormKind::L2));
            size = std::max(size, norm(next, NormKind::L2));
            wt[i] = std::move(next);
        }
        rep.differences.push_back(diff);
        rep.iterations = it;
        if (!std::isfinite(diff)) throw DivergenceError("backward iteration produced non-finite values", it);
        if (diff <= opt.tolerance * size || diff == 0.0) {
            rep.converged = true;
            break;
        }
        if (it >= 3 && diff > rep.differences[rep.differences.size() - 2])
            throw DivergenceError("backward iteration is not contracting; use smaller data or a larger T_min", it);
    }
    rep.u_app = app[0];
    rep.correction = wt[0];
    rep.u = app[0] + wt[0];
    return rep;
}

}  // namespace rnls
