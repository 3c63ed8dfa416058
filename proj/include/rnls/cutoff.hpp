#pragma once

#include <cmath>
#include <numbers>

namespace rnls {

// Even C^2 raised-cosine bump: 1 on [0,1], (1 + cos(pi (r-1)))/2 on [1,2],
// 0 beyond.
struct SmoothCutoff {
    static double value(double r) {
        const double a = std::abs(r);
        if (a <= 1.0) return 1.0;
        if (a >= 2.0) return 0.0;
        return 0.5 * (1.0 + std::cos(std::numbers::pi * (a - 1.0)));
    }
    static double derivative(double r) {
        const double a = std::abs(r);
        if (a <= 1.0 || a >= 2.0) return 0.0;
        const double g = -0.5 * std::numbers::pi * std::sin(std::numbers::pi * (a - 1.0));
        return r < 0 ? -g : g;
    }
    double operator()(double r) const { return value(r); }
};

enum class LpKind { low, band, high };  // P_{<=N}, P_N, P_{>=N}

inline double lp_multiplier(LpKind kind, double xi, double N) {
    switch (kind) {
    case LpKind::low: return SmoothCutoff::value(xi / N);
    case LpKind::band: return SmoothCutoff::value(xi / N) - SmoothCutoff::value(2.0 * xi / N);
    case LpKind::high: return 1.0 - SmoothCutoff::value(2.0 * xi / N);
    }
    return 0.0;
}

}  // namespace rnls
