#pragma once

#include <vector>

#include "rnls/profile.hpp"

namespace rnls {

struct CompletenessOptions {
    double T_min = 1.0;
    double T_max = 32.0;
    double relative_step = 0.01;  // node spacing min(relative_step * t, max_step)
    double max_step = 0.25;
    int iterations = 30;
    double tolerance = 1e-12;  // on sup_t ||w_new - w_old|| relative to sup_t ||w_new||
    double memory_ceiling_bytes = 3.0e9;
};

struct CompletenessReport {
    ProductField u;           // u_app + w~ at T_min
    ProductField u_app;       // u_app at T_min
    ProductField correction;  // w~ at T_min
    std::vector<double> differences;  // sup-in-time L^2 change per iteration
    std::vector<double> nodes;
    int iterations = 0;
    bool converged = false;
};

// Time nodes of the backward solve on [T_min, T_max].
std::vector<double> completeness_nodes(const CompletenessOptions& opt);

// Fixed-point iteration for w~ = u - u_app with w~(T_max) = 0:
//   w~(t) = i int_t^{T_max} U(t - s) S(s) ds,
//   S = P_K(|u_app + w~|^2 (u_app + w~) - |u_app|^2 u_app) - (I'1 + I'2 + I'3),
// integrated backward node by node: w~(t_i) = U(t_i - t_{i+1}) w~(t_{i+1}) plus the
// interval source, with the interaction-picture integrand U(-s)S(s) integrated by cubic
// Lagrange interpolation on the nonuniform nodes (fourth order).
CompletenessReport solve_backward_completeness(const ProfileSource& W, const LineGrid& xgrid,
                                               const CompletenessOptions& opt);

}  // namespace rnls
