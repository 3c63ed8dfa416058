#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rnls/field.hpp"
#include "rnls/resonance.hpp"

namespace rnls {

struct StepOptions {
    double sign = 1.0;           // +1 defocusing, -1 focusing
    double tolerance = 1e-15;    // relative increment of the midpoint iteration
    int max_iterations = 80;
    std::size_t step_index = 0;  // reported in instability errors
};

// Galerkin-in-y, collocation-in-x cubic term P_K(|u|^2 u) (line-physical layout).
template <class Tag>
Field<Tag> cubic_term(const Field<Tag>& u);

// Strang step: half free flow, implicit-midpoint substep of i u' = sign P_K(|u|^2 u),
// half free flow. Conserves the discrete mass to round-off.
ProductField step_full_nls(const ProductField& u, double dt, const StepOptions& opt = {});

// Joint step of (u, nu): nu follows i nu_t + Delta nu / 2 = sign P_K(2|u|^2 nu - u^2 conj(nu)),
// with u taken at the midpoint of the nonlinear substep.
std::pair<ProductField, ProductField> step_coupled(const ProductField& u, const ProductField& nu,
                                                   double dt, const StepOptions& opt = {});
ProductField step_linearized(const ProductField& nu, const ProductField& u, double dt,
                             const StepOptions& opt = {});

// Classical RK4 in tau = ln t for i dG/dtau = R[G,G,G], per velocity point.
// The time stamp is multiplied by e^{tau_dt}.
ProfileField step_resonant(const ProfileField& G, double tau_dt, const ResonanceTable& table);

// Per-v Strang step of i W_t + Delta_y W / 2 = sign t^{-1} P_K(|W|^2 W) from the field's time.
ProfileField step_asymptotic(const ProfileField& W, double dt, const StepOptions& opt = {});

// Discrete energy int |d_x u|^2 + |grad_y u|^2 + sign |u|^4 and mass int |u|^2.
double energy(const ProductField& u, double sign = 1.0);
double mass(const ProductField& u);

// Interaction-picture profile e^{-i t Delta_y / 2} W: coefficient k times e^{i t |k|^2 / 2}.
ProfileField interaction_picture(const ProfileField& W);

struct CorrectionResult {
    ProfileField F;
    double tail_estimate = 0.0;  // leading-order L^2 size of the neglected [T_max, inf) piece
    std::size_t samples = 0;
};

// F(t) = -i int_t^{T_max} sigma^{-1} sum_{omega != 0} e^{-i omega sigma / 2} WWW dsigma with the
// interaction-picture profile sampled on a uniform time grid; composite Simpson (with a
// 3/8 panel when the sample count is even). `trajectory` holds W (not the pulled-back
// profile); t must be one of the sample times.
CorrectionResult correction_F(const std::vector<ProfileField>& trajectory, double t, double T_max,
                              const ResonanceTable& table);

// Evolves u with step_full_nls; callback(step, state) after each step may stop the run
// by returning false. Instability errors carry the step index.
ProductField evolve_nls(ProductField u, double dt, std::size_t steps,
                        const std::function<bool(std::size_t, const ProductField&)>& callback = {},
                        const StepOptions& opt = {});

}  // namespace rnls
