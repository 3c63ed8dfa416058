#include "rnls/grid.hpp"

#include <cmath>
#include <numbers>

#include "rnls/errors.hpp"

namespace rnls {

LineGrid::LineGrid(double half_width, std::size_t count)
    : half_width_(half_width), count_(count) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw DomainError("line grid half width must be positive");
    if (count < 2 || count % 2 != 0)
        throw DomainError("line grid point count must be even and >= 2");
}

double LineGrid::frequency(std::size_t j) const {
    const long n = static_cast<long>(count_);
    const long m = static_cast<long>(j) < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - n;
    return std::numbers::pi * static_cast<double>(m) / half_width_;
}

double LineGrid::nyquist() const {
    return std::numbers::pi * static_cast<double>(count_ / 2) / half_width_;
}

std::vector<double> LineGrid::points() const {
    std::vector<double> p(count_);
    for (std::size_t j = 0; j < count_; ++j) p[j] = point(j);
    return p;
}

std::vector<double> LineGrid::frequencies() const {
    std::vector<double> p(count_);
    for (std::size_t j = 0; j < count_; ++j) p[j] = frequency(j);
    return p;
}

int smooth_fft_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

TorusSpectrum::TorusSpectrum(int dimension, int cutoff, int dealias_size)
    : d_(dimension), K_(cutoff) {
    if (dimension < 1 || dimension > max_dimension)
        throw DomainError("torus dimension must be in 1..4");
    if (cutoff < 0) throw DomainError("torus cutoff must be nonnegative");
    const int minimum = 4 * cutoff + 1;
    dealias_ = dealias_size == 0 ? smooth_fft_size(minimum) : dealias_size;
    if (dealias_ < minimum)
        throw DomainError("dealias size must be at least 4K+1");

    const int side = 2 * K_ + 1;
    count_ = 1;
    for (int i = 0; i < d_; ++i) count_ *= static_cast<std::size_t>(side);
    modes_.resize(count_);
    norm2_.resize(count_);
    for (std::size_t m = 0; m < count_; ++m) {
        Mode k{0, 0, 0, 0};
        std::size_t r = m;
        long n2 = 0;
        for (int i = d_ - 1; i >= 0; --i) {
            k[i] = static_cast<int>(r % side) - K_;
            r /= side;
            n2 += static_cast<long>(k[i]) * k[i];
        }
        modes_[m] = k;
        norm2_[m] = n2;
    }
}

std::size_t TorusSpectrum::padded_count() const {
    std::size_t n = 1;
    for (int i = 0; i < d_; ++i) n *= static_cast<std::size_t>(dealias_);
    return n;
}

double TorusSpectrum::bracket(std::size_t m) const {
    return std::sqrt(1.0 + static_cast<double>(norm2_[m]));
}

std::size_t TorusSpectrum::index(const Mode& k) const {
    std::size_t m = 0;
    const int side = 2 * K_ + 1;
    for (int i = 0; i < d_; ++i) {
        if (k[i] < -K_ || k[i] > K_) return count_;
        m = m * side + static_cast<std::size_t>(k[i] + K_);
    }
    return m;
}

}  // namespace rnls
