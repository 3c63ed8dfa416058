#pragma once

#include <cstdint>

#include "rnls/field.hpp"
#include "rnls/resonance.hpp"

namespace rnls {

struct PhaseContext {
    double t;
    double xi, eta, kappa;  // velocity frequencies
    std::int64_t omega;
};

struct PhaseValues {
    double psi, dpsi, ddpsi;  // Psi and its first two t-derivatives
};

// Psi = ((xi - eta - kappa)^2 + xi^2)/(2t) + t omega / 2.
PhaseValues phase_psi(const PhaseContext& c);

enum class Region { omega1, omega2, shoulder, resonant };

struct CutoffValues {
    double chi1 = 0.0, chi2 = 0.0;
    Region region = Region::resonant;
    bool defined = false;  // false for omega = 0
};

// chi2 = X(t^{3/8}/2 (zeta^2/(t^2 omega) - 1/2)) X(t^{3/8}/2 (xi^2/(t^2 omega) - 1/2)),
// zeta = xi - kappa - eta, chi1 = 1 - chi2. Region omega2 where chi2 = 1, omega1 where
// chi2 = 0, shoulder otherwise.
CutoffValues cutoffs(const PhaseContext& c);

// chi2 as the product of its two factors, each depending on one frequency.
double chi2_factor(double frequency, double t, std::int64_t omega);

// S(-t) on profiles: multiplier e^{i t |k|^2 / 2 - i zeta^2 / (2t)} in (zeta, k). This undoes
// the free part of the V equation, so S(-t)V is stationary when the nonlinearity is absent.
ProfileField pullback_S(const ProfileField& V);
ProfileField pushforward_S(const ProfileField& Z);

struct ETerms {
    ProfileField e1, e2, e3, e4;
    ProfileField target;  // t^{-1} S(-t)(P_K(w^2 conj V))
    double sum_check = 0.0;
};

// Exact partition of t^{-1} S(-t)(w^2 conj(V)):
//   e1 from w^2 - gamma^2, e2 from Gamma_0, e3/e4 from omega != 0 with chi1/chi2 weights and the
//   phase e^{-i Psi} on the discrete velocity-frequency lattice (zeta taken as the frequency
//   of the wrapped index). All fields share the v-grid and time. Throws ResourceError when
//   the grid exceeds max_points.
ETerms decompose_e_terms(const ProfileField& w, const ProfileField& gamma, const ProfileField& V,
                         const ResonanceTable& table, std::size_t max_points = 64);

struct O1Value {
    cplx value{};
    std::size_t excluded = 0;  // contributions dropped because |Psi'| < 1e-12
};

// <f4, Q> in L^2_{v,y} where Q is the e3 sum with weight chi1 e^{-i Psi} / (-i Psi').
O1Value quadrilinear_O1(const ProfileField& f1, const ProfileField& f2, const ProfileField& f3,
                        const ProfileField& f4, double t, const ResonanceTable& table,
                        std::size_t max_points = 64);

}  // namespace rnls
