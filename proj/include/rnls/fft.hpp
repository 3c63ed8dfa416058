#pragma once

#include <cstddef>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

// In-place unitary DFT along the line axis of an N x modes array stored line
// index outer. sign = -1 is the forward transform sum_j f_j e^{-2 pi i jm/N}/sqrt(N).
void fft_line(cplx* data, std::size_t n, std::size_t modes, int sign);

// Batched transforms between torus coefficients (|k|_inf <= K) and values on
// the padded physical grid y_j = 2 pi j / M (M = dealias size, per axis).
// The physical grid is stored row-major with the first axis slowest.
class TorusTransform {
public:
    TorusTransform(const TorusSpectrum& spectrum, std::size_t batch);

    // f(y_j) = sum_k c_k e^{i k.y_j}
    void to_physical(const cplx* coefficients, cplx* values) const;
    // c_k = M^{-d} sum_j f(y_j) e^{-i k.y_j}, retained for |k|_inf <= K
    void to_coefficients(const cplx* values, cplx* coefficients) const;

    std::size_t batch() const { return batch_; }
    std::size_t padded() const { return padded_; }
    const TorusSpectrum& spectrum() const { return spectrum_; }

private:
    TorusSpectrum spectrum_;
    std::size_t batch_;
    std::size_t padded_;
    std::vector<std::size_t> slot_;  // mode index -> padded index
    mutable std::vector<cplx> work_;
};

// out = P_K(a conj(b) c) for `batch` columns, exact on the padded grid.
void torus_cubic(const TorusSpectrum& spectrum, std::size_t batch, const cplx* a,
                 const cplx* b, const cplx* c, cplx* out);

// out = P_K(|a|^2 a) for `batch` columns.
void torus_cubic(const TorusSpectrum& spectrum, std::size_t batch, const cplx* a, cplx* out);

}  // namespace rnls
