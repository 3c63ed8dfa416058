#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace rnls {

// Periodic surrogate [-L, L) of the line with N points x_j = -L + j dx.
// Frequencies follow the FFT ordering: index j < N/2 maps to j, the rest to
// j - N, so the single Nyquist index N/2 carries the negative value -pi/dx.
class LineGrid {
public:
    LineGrid() = default;
    LineGrid(double half_width, std::size_t count);

    double half_width() const { return half_width_; }
    std::size_t count() const { return count_; }
    double spacing() const { return 2.0 * half_width_ / static_cast<double>(count_); }
    double point(std::size_t j) const { return -half_width_ + static_cast<double>(j) * spacing(); }
    double frequency(std::size_t j) const;
    double nyquist() const;
    std::vector<double> points() const;
    std::vector<double> frequencies() const;

    bool operator==(const LineGrid& o) const {
        // Grids built as (L / t) * t may differ from L in the last bit.
        const double tol = 1e-12 * (half_width_ > o.half_width_ ? half_width_ : o.half_width_);
        const double diff = half_width_ > o.half_width_ ? half_width_ - o.half_width_
                                                        : o.half_width_ - half_width_;
        return count_ == o.count_ && diff <= tol;
    }

private:
    double half_width_ = 1.0;
    std::size_t count_ = 2;
};

// Lattice modes k in Z^d with |k|_inf <= K. Mode index m is lexicographic in
// (k_1, ..., k_d) with k_1 slowest: m = sum_i (k_i + K) (2K+1)^(d-i).
class TorusSpectrum {
public:
    static constexpr int max_dimension = 4;
    using Mode = std::array<int, max_dimension>;

    TorusSpectrum() : TorusSpectrum(1, 0) {}
    TorusSpectrum(int dimension, int cutoff, int dealias_size = 0);

    int dimension() const { return d_; }
    int cutoff() const { return K_; }
    int side() const { return 2 * K_ + 1; }
    std::size_t mode_count() const { return count_; }
    int dealias_size() const { return dealias_; }
    std::size_t padded_count() const;

    const Mode& mode(std::size_t m) const { return modes_[m]; }
    long norm2(std::size_t m) const { return norm2_[m]; }
    const std::vector<long>& norms2() const { return norm2_; }
    double bracket(std::size_t m) const;
    // Returns mode_count() when k lies outside the cutoff.
    std::size_t index(const Mode& k) const;
    std::size_t zero_index() const { return count_ / 2; }

    bool operator==(const TorusSpectrum& o) const {
        return d_ == o.d_ && K_ == o.K_ && dealias_ == o.dealias_;
    }

private:
    int d_ = 1;
    int K_ = 0;
    int dealias_ = 1;
    std::size_t count_ = 1;
    std::vector<Mode> modes_;
    std::vector<long> norm2_;
};

// Smallest size >= n whose prime factors are all in {2,3,5,7}.
int smooth_fft_size(int n);

}  // namespace rnls
