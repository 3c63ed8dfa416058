#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rnls/evolution.hpp"
#include "rnls/field.hpp"
#include "rnls/fit.hpp"
#include "rnls/spectral.hpp"

namespace rnls {

// w(t,v,y) = t^{1/2} e^{-i t v^2/2} u(t, t v, y) on the grid v_j = x_j / t.
ProfileField extract_w(const ProductField& u);

// Inverse map u(t,x,y) = t^{-1/2} e^{i x^2 / 2t} W(x/t, y) onto the grid x_j = t v_j.
ProductField asymptotic_ansatz(const ProfileField& W);

// gamma = P_{<= sqrt t} w along v.
ProfileField extract_gamma(const ProfileField& w);

struct ScatteringError {
    double l2 = 0.0;
    double linf_h_alpha = 0.0;
};

// || u - t^{-1/2} e^{i x^2/2t} W(x/t, .) || in L^2 and in L^infty_x H^alpha_y.
ScatteringError scattering_error(const ProductField& u, const ProfileField& W, double alpha);
ScatteringError scattering_error(const ProductField& u, const ProfileField& W);

struct GammaResidual {
    ProfileField I, I1, I2, I3;
    bool fd_checked = false;
    double fd_defect = 0.0;  // L^2 norm of i g_t + Delta g/2 - t^{-1}|g|^2 g - I
};

// I1 = F^{-1}[(xi^2 X(xi/sqrt t)/(2t^2) - i xi X'(xi/sqrt t)/(2 t^{3/2})) w^],
// I2 = t^{-1} P(|w|^2 w - |g|^2 g), I3 = -t^{-1}(1 - P)(|g|^2 g), P = P_{<= sqrt t}.
// With neighbor states u(t -/+ h) the defining identity is checked by central differences.
GammaResidual gamma_residual(const ProductField& u, const ProfileField& w, const ProfileField& gamma,
                             const ProductField* u_minus = nullptr,
                             const ProductField* u_plus = nullptr, double h = 0.0,
                             double sign = 1.0);

// u_app = t^{-1/2} e^{i x^2/2t} (P_{<= sqrt t} W)(x/t, y).
ProductField build_u_app(const ProfileField& W, double t);

struct AppResidual {
    ProductField I1, I2, I3;
    ProductField sum() const { return I1 + I2 + I3; }
};

// Residual pieces of (i d_t + d_x^2/2 + Delta_y/2) u_app - |u_app|^2 u_app for W solving the
// asymptotic equation: I'1 from the time/v derivatives of the cutoff, I'2 and I'3 from the
// cubic term (I'3 = -t^{-3/2} e^{i x^2/2t}(1 - P)(|P W|^2 P W)).
AppResidual u_app_residuals(const ProfileField& W, double t, double sign = 1.0);

// Band-limited (trigonometric) interpolation of W onto another v-grid; points outside the
// source box are set to zero.
ProfileField resample_profile(const ProfileField& W, const LineGrid& target);

// A solution of the asymptotic equation that can be evaluated on any v-grid.
class ProfileSource {
public:
    virtual ~ProfileSource() = default;
    virtual ProfileField at(double t, const LineGrid& vgrid) const = 0;
    virtual TorusSpectrum spectrum() const = 0;
    virtual double sign() const { return 1.0; }
};

// Single torus mode k0 with a Gaussian velocity amplitude a e^{-(v - v0)^2 / (2 sigma^2)} at
// t1: the asymptotic equation has the closed-form solution
// c(t,v) = c(t1,v) exp(-i |k0|^2 (t - t1)/2 - i sign |c(t1,v)|^2 ln(t/t1)).
class SingleModeProfile : public ProfileSource {
public:
    SingleModeProfile(TorusSpectrum spectrum, TorusSpectrum::Mode k0, cplx amplitude, double sigma,
                      double v0 = 0.0, double t1 = 1.0, double sign = 1.0);
    ProfileField at(double t, const LineGrid& vgrid) const override;
    TorusSpectrum spectrum() const override { return spectrum_; }
    double sign() const override { return sign_; }
    cplx amplitude() const { return a_; }
    double sigma() const { return sigma_; }

private:
    TorusSpectrum spectrum_;
    std::size_t mode_;
    cplx a_;
    double sigma_, v0_, t1_, sign_;
};

// Evolves W by step_asymptotic on its own fixed v-grid, keeping checkpoints, and
// interpolates band-limited onto requested grids.
class SampledProfile : public ProfileSource {
public:
    SampledProfile(const ProfileField& W_start, double T_end, double dt, std::size_t stride = 16,
                   double sign = 1.0);
    ProfileField at(double t, const LineGrid& vgrid) const override;
    ProfileField native(double t) const;
    TorusSpectrum spectrum() const override { return checkpoints_.front().spectrum(); }
    double sign() const override { return sign_; }

private:
    std::vector<ProfileField> checkpoints_;
    double dt_, sign_;
};

// L^2 norm of the central-difference defect of u_app's equation minus sum I'.
double u_app_fd_defect(const ProfileSource& W, const LineGrid& xgrid, double t, double h);

struct ScatteringReport {
    std::vector<double> times;
    std::vector<double> err_l2;
    std::vector<double> err_linf_h_alpha;
    std::map<std::string, PowerFit> fits;
    std::map<std::string, std::vector<double>> norms;  // mass, Xplus, Y, LinfxH1y, ...
};

}  // namespace rnls
