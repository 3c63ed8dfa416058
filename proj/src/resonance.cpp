#include "rnls/resonance.hpp"

#include <array>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <tuple>

namespace rnls {

std::uint64_t ResonanceTable::estimate(int d, int K) {
    const std::uint64_t n = static_cast<std::uint64_t>(TorusSpectrum(d, K).mode_count());
    return n * n * n;
}

void ResonanceTable::enumerate(std::uint64_t ceiling) {
    const TorusSpectrum& sp = spectrum_;
    const std::size_t nm = sp.mode_count();
    const int d = sp.dimension();
    tuple_offset_.assign(nm + 1, 0);
    group_offset_.assign(nm + 1, 0);
    struct Entry {
        std::int64_t omega;
        FrequencyTuple t;
    };
    std::vector<Entry> buf;
    for (std::size_t k = 0; k < nm; ++k) {
        buf.clear();
        const auto& kk = sp.mode(k);
        for (std::size_t i1 = 0; i1 < nm; ++i1) {
            const auto& a = sp.mode(i1);
            for (std::size_t i3 = 0; i3 < nm; ++i3) {
                const auto& c = sp.mode(i3);
                TorusSpectrum::Mode b{0, 0, 0, 0};
                for (int i = 0; i < d; ++i) b[i] = a[i] + c[i] - kk[i];
                const std::size_t i2 = sp.index(b);
                if (i2 == nm) continue;
                const std::int64_t omega =
                    sp.norm2(i1) - sp.norm2(i2) + sp.norm2(i3) - sp.norm2(k);
                if (scope_ == TableScope::resonant && omega != 0) continue;
                buf.push_back({omega, {static_cast<std::int32_t>(i1), static_cast<std::int32_t>(i2),
                                       static_cast<std::int32_t>(i3)}});
            }
        }
        std::stable_sort(buf.begin(), buf.end(),
                         [](const Entry& x, const Entry& y) { return x.omega < y.omega; });
        if (tuples_.size() + buf.size() > ceiling)
            throw ResourceError("resonance table exceeds the configured tuple ceiling");
        const std::uint64_t base = tuples_.size();
        for (std::size_t i = 0; i < buf.size(); ++i) {
            if (i == 0 || buf[i].omega != buf[i - 1].omega)
                groups_.push_back({buf[i].omega, i, i});
            groups_.back().end = i + 1;
            tuples_.push_back(buf[i].t);
        }
        tuple_offset_[k + 1] = base + buf.size();
        group_offset_[k + 1] = groups_.size();
    }
}

std::shared_ptr<const ResonanceTable> ResonanceTable::build(int d, int K, TableScope scope,
                                                            std::uint64_t ceiling) {
    if (d < 1 || d > 4) throw DomainError("table dimension must be in 1..4");
    if (K < 1) throw DomainError("table cutoff must be >= 1");
    static std::mutex mtx;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const ResonanceTable>> memo;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(d, K, static_cast<int>(scope));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (scope == TableScope::full && estimate(d, K) > ceiling)
        throw ResourceError("estimated size of M(k) tables exceeds the configured ceiling");
    std::shared_ptr<ResonanceTable> t(new ResonanceTable());
    t->spectrum_ = TorusSpectrum(d, K);
    t->scope_ = scope;
    t->enumerate(ceiling);
    memo.emplace(key, t);
    return t;
}

std::span<const FrequencyTuple> ResonanceTable::tuples(std::size_t k) const {
    return {tuples_.data() + tuple_offset_[k], tuples_.data() + tuple_offset_[k + 1]};
}

std::span<const LevelGroup> ResonanceTable::groups(std::size_t k) const {
    return {groups_.data() + group_offset_[k], groups_.data() + group_offset_[k + 1]};
}

std::span<const FrequencyTuple> ResonanceTable::resonant(std::size_t k) const {
    const auto tup = tuples(k);
    for (const LevelGroup& g : groups(k))
        if (g.omega == 0) return tup.subspan(g.begin, g.end - g.begin);
    return {};
}

std::map<std::int64_t, std::uint64_t> ResonanceTable::level_counts() const {
    std::map<std::int64_t, std::uint64_t> c;
    for (const LevelGroup& g : groups_) c[g.omega] += g.end - g.begin;
    return c;
}

namespace {

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void put_vec(std::ostream& os, const std::vector<T>& v) {
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}
template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FormatError("truncated resonance table cache");
    return v;
}
template <class T>
void get_vec(std::istream& is, std::vector<T>& v, std::uint64_t n) {
    v.resize(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!is) throw FormatError("truncated resonance table cache");
}

}  // namespace

// Cache layout (little endian): "RNLT", u32 version, u32 d, u32 K, u8 scope,
// u64 modes, u64 tuples, u64 groups, u64[modes+1] tuple offsets,
// u64[modes+1] group offsets, groups {i64 omega, u64 begin, u64 end},
// tuples {i32 k1, i32 k2, i32 k3}.
void ResonanceTable::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot write " + path);
    os.write("RNLT", 4);
    put(os, cache_version);
    put(os, static_cast<std::uint32_t>(dimension()));
    put(os, static_cast<std::uint32_t>(cutoff()));
    put(os, static_cast<std::uint8_t>(scope_));
    put(os, static_cast<std::uint64_t>(mode_count()));
    put(os, static_cast<std::uint64_t>(tuples_.size()));
    put(os, static_cast<std::uint64_t>(groups_.size()));
    put_vec(os, tuple_offset_);
    put_vec(os, group_offset_);
    put_vec(os, groups_);
    put_vec(os, tuples_);
    if (!os) throw FormatError("write failed for " + path);
}

std::shared_ptr<const ResonanceTable> ResonanceTable::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "RNLT") throw FormatError("bad resonance cache magic");
    if (get<std::uint32_t>(is) != cache_version) throw FormatError("stale resonance cache version");
    const int d = static_cast<int>(get<std::uint32_t>(is));
    const int K = static_cast<int>(get<std::uint32_t>(is));
    const auto scope = static_cast<TableScope>(get<std::uint8_t>(is));
    std::shared_ptr<ResonanceTable> t(new ResonanceTable());
    t->spectrum_ = TorusSpectrum(d, K);
    t->scope_ = scope;
    const auto nm = get<std::uint64_t>(is);
    if (nm != t->spectrum_.mode_count()) throw FormatError("resonance cache mode count mismatch");
    const auto nt = get<std::uint64_t>(is);
    const auto ng = get<std::uint64_t>(is);
    get_vec(is, t->tuple_offset_, nm + 1);
    get_vec(is, t->group_offset_, nm + 1);
    get_vec(is, t->groups_, ng);
    get_vec(is, t->tuples_, nt);
    return t;
}

std::shared_ptr<const ResonanceTable> ResonanceTable::cached(const std::string& path, int d, int K,
                                                             TableScope scope) {
    if (std::filesystem::exists(path)) {
        try {
            auto t = load(path);
            if (t->dimension() == d && t->cutoff() == K && t->scope() == scope) return t;
        } catch (const FormatError&) {
        }
    }
    auto t = build(d, K, scope);
    t->save(path);
    return t;
}

void resonant_form_R(const cplx* f1, const cplx* f2, const cplx* f3, cplx* out,
                     const ResonanceTable& table) {
    for (std::size_t k = 0; k < table.mode_count(); ++k) {
        cplx s{};
        for (const FrequencyTuple& q : table.resonant(k)) s += f1[q.k1] * std::conj(f2[q.k2]) * f3[q.k3];
        out[k] = s;
    }
}

namespace {

void check_columns(const TorusColumn& a, const TorusColumn& b, const TorusColumn& c,
                   const ResonanceTable& table) {
    const std::size_t n = table.mode_count();
    if (a.size() != n || b.size() != n || c.size() != n)
        throw ShapeError("torus column size does not match the resonance table");
}

void require_full(const ResonanceTable& table) {
    if (table.scope() != TableScope::full)
        throw DomainError("nonresonant forms need a full resonance table");
}

}  // namespace

TorusColumn resonant_form_R(const TorusColumn& f1, const TorusColumn& f2, const TorusColumn& f3,
                            const ResonanceTable& table) {
    check_columns(f1, f2, f3, table);
    TorusColumn out(table.mode_count());
    resonant_form_R(f1.data(), f2.data(), f3.data(), out.data(), table);
    return out;
}

TorusColumn nonresonant_form_E(const TorusColumn& f1, const TorusColumn& f2,
                               const TorusColumn& f3, double t, const ResonanceTable& table) {
    check_columns(f1, f2, f3, table);
    require_full(table);
    TorusColumn out(table.mode_count());
    weighted_form(f1.data(), f2.data(), f3.data(), out.data(), table, [t](std::int64_t w) {
        return w == 0 ? cplx{} : std::polar(1.0, 0.5 * static_cast<double>(w) * t);
    });
    return out;
}

TorusColumn weighted_form_D(const TorusColumn& f1, const TorusColumn& f2, const TorusColumn& f3,
                            double t, const ResonanceTable& table) {
    if (!(t > 0.0)) throw DomainError("weighted form needs t > 0");
    check_columns(f1, f2, f3, table);
    require_full(table);
    TorusColumn out(table.mode_count());
    weighted_form(f1.data(), f2.data(), f3.data(), out.data(), table, [t](std::int64_t w) {
        if (w == 0) return cplx{};
        const double om = static_cast<double>(w);
        return (2.0 / t) * std::polar(1.0, 0.5 * om * t) / cplx(0.0, om);
    });
    return out;
}

TorusColumn full_form(const TorusColumn& f1, const TorusColumn& f2, const TorusColumn& f3,
                      const ResonanceTable& table) {
    check_columns(f1, f2, f3, table);
    require_full(table);
    TorusColumn out(table.mode_count());
    weighted_form(f1.data(), f2.data(), f3.data(), out.data(), table,
                  [](std::int64_t) { return cplx(1.0); });
    return out;
}

namespace {

double l2(const TorusColumn& a) {
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    return std::sqrt(s);
}
double l1(const TorusColumn& a) {
    double s = 0.0;
    for (const cplx& z : a) s += std::abs(z);
    return s;
}
double h1(const TorusColumn& a, const TorusSpectrum& sp) {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) s += (1.0 + static_cast<double>(sp.norm2(m))) * std::norm(a[m]);
    return std::sqrt(s);
}

// min over permutations of n2(a_i) n1(a_j) n1(a_l); the two trailing norms
// are the same kind, so only the choice of the leading index matters.
template <class N2, class N1>
double min_over_perms(const TorusColumn* a[3], N2&& lead, N1&& rest) {
    double best = INFINITY;
    for (int i = 0; i < 3; ++i) {
        double v = lead(*a[i]);
        for (int j = 0; j < 3; ++j)
            if (j != i) v *= rest(*a[j]);
        best = std::min(best, v);
    }
    return best;
}

TorusColumn random_column(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    TorusColumn c(n);
    for (auto& z : c) z = {g(rng), g(rng)};
    return c;
}

// Gaussian coefficients with a random algebraic decay <k>^{-beta}, beta in
// [0, 3]. Concentrated draws probe the near-extremal regime of the ratio.
TorusColumn decaying_column(const TorusSpectrum& sp, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> b(0.0, 6.0);
    const double beta = b(rng);
    TorusColumn c = random_column(sp.mode_count(), rng);
    for (std::size_t m = 0; m < c.size(); ++m) c[m] *= std::pow(sp.bracket(m), -beta);
    return c;
}

}  // namespace

double trilinear_ratio(const TorusColumn& a1, const TorusColumn& a2, const TorusColumn& a3,
                       const ResonanceTable& table) {
    check_columns(a1, a2, a3, table);
    const TorusColumn* a[3] = {&a1, &a2, &a3};
    const auto& sp = table.spectrum();
    const double den = min_over_perms(a, l2, [&](const TorusColumn& c) { return h1(c, sp); });
    if (!(den > 0.0)) return -1.0;
    return l2(resonant_form_R(a1, a2, a3, table)) / den;
}

double elementary_ratio(const TorusColumn& c1, const TorusColumn& c2, const TorusColumn& c3,
                        const ResonanceTable& table) {
    check_columns(c1, c2, c3, table);
    const TorusColumn* a[3] = {&c1, &c2, &c3};
    const double den = min_over_perms(a, l2, l1);
    if (!(den > 0.0)) return -1.0;
    TorusColumn c2bar(c2.size());
    for (std::size_t i = 0; i < c2.size(); ++i) c2bar[i] = std::conj(c2[i]);
    return l2(full_form(c1, c2bar, c3, table)) / den;
}

namespace {

// One slot of R[a1, a2, a3] as a linear map with the other two frozen. The
// second slot enters through its conjugate, so the variable there is conj(a2).
struct SlotMap {
    const ResonanceTable& table;
    const std::array<TorusColumn, 3>& a;
    int slot;

    cplx coefficient(const FrequencyTuple& q) const {
        switch (slot) {
        case 0: return std::conj(a[1][q.k2]) * a[2][q.k3];
        case 1: return a[0][q.k1] * a[2][q.k3];
        default: return a[0][q.k1] * std::conj(a[1][q.k2]);
        }
    }
    std::int32_t target(const FrequencyTuple& q) const {
        return slot == 0 ? q.k1 : slot == 1 ? q.k2 : q.k3;
    }
    TorusColumn apply(const TorusColumn& x) const {
        TorusColumn out(x.size());
        for (std::size_t k = 0; k < table.mode_count(); ++k)
            for (const FrequencyTuple& q : table.resonant(k)) out[k] += coefficient(q) * x[target(q)];
        return out;
    }
    TorusColumn adjoint(const TorusColumn& y) const {
        TorusColumn out(y.size());
        for (std::size_t k = 0; k < table.mode_count(); ++k)
            for (const FrequencyTuple& q : table.resonant(k))
                out[target(q)] += std::conj(coefficient(q)) * y[k];
        return out;
    }
};

// Block-coordinate ascent of ||R|| / (|a_lead|_2 prod_{others} |a|_{h^1}):
// each slot in turn is replaced by the top right singular vector of its
// (weighted) linear map, found by power iteration. Returns the best value of
// the full ratio (minimum over permutations) seen along the way.
double block_ascent(std::array<TorusColumn, 3> a, int lead, const ResonanceTable& table) {
    const auto& sp = table.spectrum();
    const std::size_t n = sp.mode_count();
    double best = trilinear_ratio(a[0], a[1], a[2], table);
    for (int sweep = 0; sweep < 6; ++sweep) {
        for (int slot = 0; slot < 3; ++slot) {
            std::vector<double> w(n, 1.0);
            if (slot != lead)
                for (std::size_t m = 0; m < n; ++m) w[m] = sp.bracket(m);
            const SlotMap map{table, a, slot};
            TorusColumn c(n);
            for (std::size_t m = 0; m < n; ++m)
                c[m] = w[m] * (slot == 1 ? std::conj(a[1][m]) : a[slot][m]);
            for (int it = 0; it < 12; ++it) {
                TorusColumn x(n);
                for (std::size_t m = 0; m < n; ++m) x[m] = c[m] / w[m];
                TorusColumn y = map.adjoint(map.apply(x));
                double nn = 0.0;
                for (std::size_t m = 0; m < n; ++m) {
                    c[m] = y[m] / w[m];
                    nn += std::norm(c[m]);
                }
                if (!(nn > 0.0)) return best;
                nn = 1.0 / std::sqrt(nn);
                for (auto& z : c) z *= nn;
            }
            for (std::size_t m = 0; m < n; ++m) {
                const cplx x = c[m] / w[m];
                a[slot][m] = slot == 1 ? std::conj(x) : x;
            }
        }
        best = std::max(best, trilinear_ratio(a[0], a[1], a[2], table));
    }
    return best;
}

}  // namespace

BoundReport verify_trilinear_bound(std::size_t trials, int d, int K, std::uint64_t seed) {
    if (trials < 1) throw DomainError("at least one trial is required");
    auto table = ResonanceTable::build(d, K, TableScope::resonant);
    std::mt19937_64 rng(seed);
    BoundReport r;
    std::vector<std::pair<double, std::array<TorusColumn, 3>>> starts;
    for (std::size_t i = 0; i < trials; ++i) {
        auto a1 = decaying_column(table->spectrum(), rng);
        auto a2 = decaying_column(table->spectrum(), rng);
        auto a3 = decaying_column(table->spectrum(), rng);
        const double q = trilinear_ratio(a1, a2, a3, *table);
        if (q < 0) {
            ++r.skipped;
            continue;
        }
        ++r.used;
        r.max_constant = std::max(r.max_constant, q);
        starts.push_back({q, {a1, a2, a3}});
        std::sort(starts.begin(), starts.end(),
                  [](const auto& x, const auto& y) { return x.first > y.first; });
        if (starts.size() > 3) starts.pop_back();
    }
    if (r.used == 0) return r;
    for (const auto& start : starts)
        for (int lead = 0; lead < 3; ++lead)
            r.max_constant = std::max(r.max_constant, block_ascent(start.second, lead, *table));
    return r;
}

BoundReport verify_elementary_bound(std::size_t trials, int K, std::uint64_t seed, int d) {
    if (trials < 1) throw DomainError("at least one trial is required");
    auto table = ResonanceTable::build(d, K, TableScope::full);
    std::mt19937_64 rng(seed);
    BoundReport r;
    for (std::size_t i = 0; i < trials; ++i) {
        auto c1 = random_column(table->mode_count(), rng);
        auto c2 = random_column(table->mode_count(), rng);
        auto c3 = random_column(table->mode_count(), rng);
        const double q = elementary_ratio(c1, c2, c3, *table);
        if (q < 0) {
            ++r.skipped;
            continue;
        }
        ++r.used;
        r.max_constant = std::max(r.max_constant, q);
    }
    return r;
}

}  // namespace rnls
