#pragma once

#include <cstddef>
#include <vector>

namespace rnls {

// Least-squares fit of log(value) = log(prefactor) + exponent * log(t) over
// samples with t in [t_lo, t_hi] and value > 0. residual is the RMS of the
// log-space residuals.
struct PowerFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t samples = 0;
};

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value, double t_lo,
                       double t_hi);

// Observed order log2(e(h)/e(h/2)) from errors at successively halved steps.
std::vector<double> observed_orders(const std::vector<double>& errors);

}  // namespace rnls
