#pragma once

#include "rnls/cutoff.hpp"
#include "rnls/field.hpp"

namespace rnls {

enum class Direction { forward, inverse };
enum class Axis { y, line };  // line = x for product fields, v for profile fields

template <class Tag>
Field<Tag> transform_x(const Field<Tag>& f, Direction dir);

// Multiplier applied to the line-axis spectrum; N must be positive.
template <class Tag>
Field<Tag> lp_project(const Field<Tag>& f, LpKind kind, double N);

// |k|^s or <k>^s on the torus axis, |xi|^s or <xi>^s on the line axis.
template <class Tag>
Field<Tag> frac_derivative(const Field<Tag>& f, double s, Axis axis, bool homogeneous);

// Spectral derivative along the line axis (Nyquist mode dropped).
template <class Tag>
Field<Tag> line_derivative(const Field<Tag>& f);

// Free flow e^{i dt (d_x^2 + Delta_y)/2}: multiplies spectral data by
// e^{-i dt (xi^2 + |k|^2)/2}. The time stamp advances by dt.
ProductField linear_propagator(const ProductField& u, double dt);

// Torus part only: multiplies coefficient k by e^{-i dt |k|^2 / 2}.
template <class Tag>
Field<Tag> torus_propagator(const Field<Tag>& f, double dt);

// L_x u = x u + i t d_x u at the field's time.
ProductField vector_field_Lx(const ProductField& u);

// Multiplication by the line coordinate.
template <class Tag>
Field<Tag> multiply_coordinate(const Field<Tag>& f);

enum class NormKind { L2, LinfxHay, H01x, Xplus, Y };

struct NormParams {
    double alpha;
    double s;
    static NormParams defaults(int d) { return {d / 2.0 + 0.1, 3.0 * (d / 2.0 + 0.1)}; }
};

template <class Tag>
double norm(const Field<Tag>& f, NormKind which, const NormParams& p);

template <class Tag>
double norm(const Field<Tag>& f, NormKind which) {
    return norm(f, which, NormParams::defaults(f.spectrum().dimension()));
}

// sup over line points of the per-point H^alpha_y norm,
// (2 pi)^{d/2} (sum_k <k>^{2 alpha} |c_k|^2)^{1/2}.
template <class Tag>
double linf_h_alpha(const Field<Tag>& f, double alpha);

// L^2 inner product <a, b> = dx (2 pi)^d sum conj(a) b (physical layout).
template <class Tag>
cplx inner(const Field<Tag>& a, const Field<Tag>& b);

// Values on the padded torus grid for every line point, line index outer.
template <class Tag>
std::vector<cplx> torus_values(const Field<Tag>& f);

// max over line points and padded torus points of |f|.
template <class Tag>
double sup_abs(const Field<Tag>& f);

// Mass dx (2 pi)^d sum |u|^2 in the outer 10% of the line box divided by the
// total mass (0 when the field vanishes).
template <class Tag>
double boundary_mass_fraction(const Field<Tag>& f);

template <class Tag>
void require_finite(const Field<Tag>& f, const char* what);

}  // namespace rnls

#include <functional>

namespace rnls {

// Generic multiplier m(xi) on the line-axis spectrum; the representation is preserved.
template <class Tag>
Field<Tag> apply_line_multiplier(const Field<Tag>& f, const std::function<cplx(double)>& m);

// Multiplies torus coefficient k by m(|k|^2).
template <class Tag>
Field<Tag> apply_torus_multiplier(const Field<Tag>& f, const std::function<cplx(long)>& m);

}  // namespace rnls
