#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

// Which part of M(k) a table stores. Resonant-only tables keep Gamma_0 and
// make the resonant form affordable in high dimension.
enum class TableScope : std::uint8_t { full = 0, resonant = 1 };

struct FrequencyTuple {
    std::int32_t k1, k2, k3;  // mode indices into the table's spectrum
};

struct LevelGroup {
    std::int64_t omega;
    std::uint64_t begin, end;  // range into the tuple array of the output mode
};

// omega = |k1|^2 - |k2|^2 + |k3|^2 - |k|^2 over tuples k1 - k2 + k3 = k with
// all four indices inside the cutoff. Tuples of an output mode are sorted by
// omega, then by (k1, k3); every ordered tuple appears once.
class ResonanceTable {
public:
    static constexpr std::uint32_t cache_version = 1;
    static constexpr std::uint64_t default_ceiling = 200'000'000;

    // Memoized on (d, K, scope).
    static std::shared_ptr<const ResonanceTable> build(int d, int K,
                                                       TableScope scope = TableScope::full,
                                                       std::uint64_t ceiling = default_ceiling);
    // Reads the cache file if it matches (d, K, scope, version), otherwise
    // builds the table and writes the cache.
    static std::shared_ptr<const ResonanceTable> cached(const std::string& path, int d, int K,
                                                        TableScope scope = TableScope::full);

    // Upper bound on stored tuples before enumeration.
    static std::uint64_t estimate(int d, int K);

    const TorusSpectrum& spectrum() const { return spectrum_; }
    int dimension() const { return spectrum_.dimension(); }
    int cutoff() const { return spectrum_.cutoff(); }
    TableScope scope() const { return scope_; }
    std::size_t mode_count() const { return spectrum_.mode_count(); }

    std::span<const FrequencyTuple> tuples(std::size_t k) const;
    std::span<const LevelGroup> groups(std::size_t k) const;
    // Gamma_0(k); empty if the mode has no resonant tuples (never: (k,k,k)).
    std::span<const FrequencyTuple> resonant(std::size_t k) const;
    std::uint64_t total_tuples() const { return tuples_.size(); }
    std::map<std::int64_t, std::uint64_t> level_counts() const;

    void save(const std::string& path) const;
    static std::shared_ptr<const ResonanceTable> load(const std::string& path);

private:
    ResonanceTable() = default;
    void enumerate(std::uint64_t ceiling);

    TorusSpectrum spectrum_;
    TableScope scope_ = TableScope::full;
    std::vector<FrequencyTuple> tuples_;
    std::vector<std::uint64_t> tuple_offset_;  // size modes + 1
    std::vector<LevelGroup> groups_;
    std::vector<std::uint64_t> group_offset_;  // size modes + 1
};

using TablePtr = std::shared_ptr<const ResonanceTable>;

// Column kernels on raw arrays of mode_count entries.
void resonant_form_R(const cplx* f1, const cplx* f2, const cplx* f3, cplx* out,
                     const ResonanceTable& table);
// out = sum over tuples of weight(omega) f1 conj(f2) f3; weight must be
// callable as cplx(int64_t). Levels with zero weight are skipped cheaply.
template <class Weight>
void weighted_form(const cplx* f1, const cplx* f2, const cplx* f3, cplx* out,
                   const ResonanceTable& table, Weight&& weight) {
    for (std::size_t k = 0; k < table.mode_count(); ++k) {
        const auto tup = table.tuples(k);
        cplx acc{};
        for (const LevelGroup& g : table.groups(k)) {
            const cplx w = weight(g.omega);
            if (w == cplx{}) continue;
            cplx s{};
            for (std::uint64_t i = g.begin; i < g.end; ++i) {
                const FrequencyTuple& q = tup[i];
                s += f1[q.k1] * std::conj(f2[q.k2]) * f3[q.k3];
            }
            acc += w * s;
        }
        out[k] = acc;
    }
}

TorusColumn resonant_form_R(const TorusColumn& f1, const TorusColumn& f2, const TorusColumn& f3,
                            const ResonanceTable& table);
// sum_{omega != 0} e^{i omega t/2} f1 conj(f2) f3
TorusColumn nonresonant_form_E(const TorusColumn& f1, const TorusColumn& f2,
                               const TorusColumn& f3, double t, const ResonanceTable& table);
// (2/t) sum_{omega != 0} e^{i omega t/2} / (i omega) f1 conj(f2) f3
TorusColumn weighted_form_D(const TorusColumn& f1, const TorusColumn& f2, const TorusColumn& f3,
                            double t, const ResonanceTable& table);
// sum over all of M(k) (every level, weight 1).
TorusColumn full_form(const TorusColumn& f1, const TorusColumn& f2, const TorusColumn& f3,
                      const ResonanceTable& table);

struct BoundReport {
    double max_constant = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
};

// max over random draws of ||R[a1,a2,a3]||_l2 / min_tau ||a_t1||_l2 ||a_t2||_h1 ||a_t3||_h1
BoundReport verify_trilinear_bound(std::size_t trials, int d, int K, std::uint64_t seed);
// max over random draws of ||sum_M c1 c2 c3||_l2 / min_tau ||c_t1||_l2 ||c_t2||_l1 ||c_t3||_l1
BoundReport verify_elementary_bound(std::size_t trials, int K, std::uint64_t seed, int d = 1);

// The ratio of a single draw; returns a negative value for degenerate draws.
double trilinear_ratio(const TorusColumn& a1, const TorusColumn& a2, const TorusColumn& a3,
                       const ResonanceTable& table);
double elementary_ratio(const TorusColumn& c1, const TorusColumn& c2, const TorusColumn& c3,
                        const ResonanceTable& table);

}  // namespace rnls
