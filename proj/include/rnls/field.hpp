#pragma once

#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "rnls/errors.hpp"
#include "rnls/grid.hpp"

namespace rnls {

using cplx = std::complex<double>;

// Layout flag of the line axis; the torus axes are always spectral.
enum class Representation : std::uint8_t { physical = 0, spectral = 1 };

struct ProductTag {};
struct ProfileTag {};

// Complex array of shape N x (2K+1)^d, line index outer, mode index inner.
// For a product field the line axis is x; for a profile field it is the
// velocity axis v (v_j = x_j / t when obtained by extraction at time t).
template <class Tag>
class Field {
public:
    Field() = default;
    Field(LineGrid grid, TorusSpectrum spectrum, double time,
          Representation rep = Representation::physical)
        : grid_(grid), spectrum_(spectrum), time_(time), rep_(rep),
          data_(grid.count() * spectrum.mode_count()) {
        if constexpr (std::is_same_v<Tag, ProfileTag>) {
            if (!(time > 0.0)) throw DomainError("profile fields require t > 0");
        }
    }

    const LineGrid& grid() const { return grid_; }
    const TorusSpectrum& spectrum() const { return spectrum_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }
    Representation representation() const { return rep_; }
    void set_representation(Representation r) { rep_ = r; }

    std::size_t points() const { return grid_.count(); }
    std::size_t modes() const { return spectrum_.mode_count(); }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t j, std::size_t m) { return data_[j * modes() + m]; }
    const cplx& operator()(std::size_t j, std::size_t m) const { return data_[j * modes() + m]; }
    cplx* column(std::size_t j) { return data_.data() + j * modes(); }
    const cplx* column(std::size_t j) const { return data_.data() + j * modes(); }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    bool same_shape(const Field& o) const {
        return grid_ == o.grid_ && spectrum_ == o.spectrum_;
    }

    Field& operator+=(const Field& o) {
        check(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        check(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Field& operator*=(cplx a) {
        for (auto& z : data_) z *= a;
        return *this;
    }
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(cplx a, Field b) { return b *= a; }

    Field zeros_like() const { return Field(grid_, spectrum_, time_, rep_); }

private:
    void check(const Field& o) const {
        if (!same_shape(o)) throw ShapeError("field shapes differ");
        if (rep_ != o.rep_) throw RepresentationError("field representations differ");
    }

    LineGrid grid_;
    TorusSpectrum spectrum_;
    double time_ = 0.0;
    Representation rep_ = Representation::physical;
    std::vector<cplx> data_;
};

using ProductField = Field<ProductTag>;
using ProfileField = Field<ProfileTag>;

// A set of torus coefficients at one spatial point.
using TorusColumn = std::vector<cplx>;

}  // namespace rnls
