#include "rnls/fit.hpp"

#include <cmath>

#include "rnls/errors.hpp"

namespace rnls {

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value, double t_lo,
                       double t_hi) {
    if (t.size() != value.size()) throw ShapeError("fit series lengths differ");
    std::vector<double> X, Y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(value[i] > 0.0) || !(t[i] > 0.0)) continue;
        X.push_back(std::log(t[i]));
        Y.push_back(std::log(value[i]));
    }
    PowerFit f;
    f.t_lo = t_lo;
    f.t_hi = t_hi;
    f.samples = X.size();
    if (X.size() < 2) throw DomainError("power-law fit needs at least two samples in the window");
    const double n = static_cast<double>(X.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        sx += X[i];
        sy += Y[i];
        sxx += X[i] * X[i];
        sxy += X[i] * Y[i];
    }
    const double den = n * sxx - sx * sx;
    if (!(den > 0.0)) throw DomainError("degenerate fit window");
    f.exponent = (n * sxy - sx * sy) / den;
    const double a = (sy - f.exponent * sx) / n;
    f.prefactor = std::exp(a);
    double r = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double e = Y[i] - a - f.exponent * X[i];
        r += e * e;
    }
    f.residual = std::sqrt(r / n);
    return f;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
    std::vector<double> p;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) p.push_back(std::log2(errors[i] / errors[i + 1]));
    return p;
}

}  // namespace rnls
