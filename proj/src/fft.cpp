#include "rnls/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace rnls {
namespace {

using PlanKey = std::tuple<int, std::vector<int>, std::size_t, std::size_t, std::size_t, int>;

std::mutex plan_mutex;

// Plans are made in place on a scratch buffer with FFTW_UNALIGNED so that
// new-array execution on any buffer of the same geometry is valid.
fftw_plan cached_plan(const std::vector<int>& dims, std::size_t howmany, std::size_t stride,
                      std::size_t dist, int sign) {
    static std::map<PlanKey, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(plan_mutex);
    PlanKey key{static_cast<int>(dims.size()), dims, howmany, stride, dist, sign};
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::size_t n = 1;
    for (int v : dims) n *= static_cast<std::size_t>(v);
    const std::size_t extent = (n - 1) * stride + (howmany - 1) * dist + 1;
    auto* scratch = fftw_alloc_complex(extent);
    fftw_plan p = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(),
                                     static_cast<int>(howmany), scratch, nullptr,
                                     static_cast<int>(stride), static_cast<int>(dist), scratch,
                                     nullptr, static_cast<int>(stride), static_cast<int>(dist),
                                     sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!p) throw ComputationError("FFTW plan creation failed");
    plans.emplace(key, p);
    return p;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void fft_line(cplx* data, std::size_t n, std::size_t modes, int sign) {
    fftw_plan p = cached_plan({static_cast<int>(n)}, modes, modes, 1,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, as_fftw(data), as_fftw(data));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n * modes; ++i) data[i] *= scale;
}

TorusTransform::TorusTransform(const TorusSpectrum& spectrum, std::size_t batch)
    : spectrum_(spectrum), batch_(batch), padded_(spectrum.padded_count()) {
    const int M = spectrum.dealias_size();
    const int d = spectrum.dimension();
    slot_.resize(spectrum.mode_count());
    for (std::size_t m = 0; m < spectrum.mode_count(); ++m) {
        std::size_t s = 0;
        for (int i = 0; i < d; ++i) {
            const int k = spectrum.mode(m)[i];
            s = s * M + static_cast<std::size_t>((k % M + M) % M);
        }
        slot_[m] = s;
    }
    work_.resize(padded_ * batch_);
}

void TorusTransform::to_physical(const cplx* coefficients, cplx* values) const {
    const std::size_t nm = spectrum_.mode_count();
    for (std::size_t b = 0; b < batch_; ++b) {
        cplx* out = values + b * padded_;
        std::fill(out, out + padded_, cplx{});
        const cplx* in = coefficients + b * nm;
        for (std::size_t m = 0; m < nm; ++m) out[slot_[m]] = in[m];
    }
    std::vector<int> dims(spectrum_.dimension(), spectrum_.dealias_size());
    fftw_plan p = cached_plan(dims, batch_, 1, padded_, FFTW_BACKWARD);
    fftw_execute_dft(p, as_fftw(values), as_fftw(values));
}

void TorusTransform::to_coefficients(const cplx* values, cplx* coefficients) const {
    std::copy(values, values + padded_ * batch_, work_.begin());
    std::vector<int> dims(spectrum_.dimension(), spectrum_.dealias_size());
    fftw_plan p = cached_plan(dims, batch_, 1, padded_, FFTW_FORWARD);
    fftw_execute_dft(p, as_fftw(work_.data()), as_fftw(work_.data()));
    const std::size_t nm = spectrum_.mode_count();
    const double scale = 1.0 / static_cast<double>(padded_);
    for (std::size_t b = 0; b < batch_; ++b) {
        const cplx* in = work_.data() + b * padded_;
        cplx* out = coefficients + b * nm;
        for (std::size_t m = 0; m < nm; ++m) out[m] = in[slot_[m]] * scale;
    }
}

void torus_cubic(const TorusSpectrum& spectrum, std::size_t batch, const cplx* a,
                 const cplx* b, const cplx* c, cplx* out) {
    TorusTransform tr(spectrum, batch);
    const std::size_t n = tr.padded() * batch;
    std::vector<cplx> pa(n), pb(n), pc(n);
    tr.to_physical(a, pa.data());
    tr.to_physical(b, pb.data());
    tr.to_physical(c, pc.data());
    for (std::size_t i = 0; i < n; ++i) pa[i] = pa[i] * std::conj(pb[i]) * pc[i];
    tr.to_coefficients(pa.data(), out);
}

void torus_cubic(const TorusSpectrum& spectrum, std::size_t batch, const cplx* a, cplx* out) {
    TorusTransform tr(spectrum, batch);
    const std::size_t n = tr.padded() * batch;
    std::vector<cplx> pa(n);
    tr.to_physical(a, pa.data());
    for (std::size_t i = 0; i < n; ++i) pa[i] *= std::norm(pa[i]);
    tr.to_coefficients(pa.data(), out);
}

}  // namespace rnls
