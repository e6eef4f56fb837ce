#include "core/exact_count.hpp"

#include "core/errors.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace diagarcs {

const char* to_string(CountMethod m) { return m == CountMethod::brute ? "brute" : "mim"; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Per-variable tables of the n-vector (u_{i,j} x^{k_i})_i for x in [lo, hi].
struct ValueTables {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<std::vector<i128>> var;
};

ValueTables build_tables(const DiagonalSystem& F, std::int64_t lo, std::int64_t hi) {
    ValueTables t;
    t.n = F.n();
    t.m = std::size_t(hi - lo + 1);
    t.var.assign(F.s(), std::vector<i128>(t.m * t.n));
    std::vector<i128> row_bound(t.n, 0);
    for (std::size_t j = 0; j < F.s(); ++j) {
        std::vector<i128> col_max(t.n, 0);
        for (std::size_t xi = 0; xi < t.m; ++xi) {
            const std::int64_t x = lo + std::int64_t(xi);
            for (std::size_t i = 0; i < t.n; ++i) {
                i128 v = mul_checked(F.coeff(i, j), pow_checked(x, F.k()[i]));
                t.var[j][xi * t.n + i] = v;
                col_max[i] = std::max(col_max[i], v < 0 ? -v : v);
            }
        }
        // partial sums can never exceed the sum of column maxima
        for (std::size_t i = 0; i < t.n; ++i) row_bound[i] = add_checked(row_bound[i], col_max[i]);
    }
    return t;
}

template <class Fn>
void descend(const ValueTables& t, std::span<const std::size_t> vars, std::size_t level, i128* sums, Fn& fn) {
    const std::size_t n = t.n;
    const i128* prev = sums + level * n;
    i128* cur = sums + (level + 1) * n;
    const i128* tab = t.var[vars[level]].data();
    const bool last = level + 1 == vars.size();
    for (std::size_t x = 0; x < t.m; ++x) {
        const i128* v = tab + x * n;
        for (std::size_t i = 0; i < n; ++i) cur[i] = prev[i] + v[i];
        if (last)
            fn(static_cast<const i128*>(cur));
        else
            descend(t, vars, level + 1, sums, fn);
    }
}

// Visits the partial-sum vector of every tuple of the block whose first
// variable takes the value with table index first.
template <class Fn>
void for_each_tuple(const ValueTables& t, std::span<const std::size_t> vars, std::size_t first, Fn&& fn) {
    const std::size_t n = t.n;
    std::vector<i128> sums((vars.size() + 1) * n, 0);
    const i128* v0 = t.var[vars[0]].data() + first * n;
    std::copy(v0, v0 + n, sums.begin() + n);
    if (vars.size() == 1) {
        fn(static_cast<const i128*>(sums.data() + n));
        return;
    }
    descend(t, vars, 1, sums.data(), fn);
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Open-addressing multiset of exact n-vectors of 128-bit integers.
class VectorCounter {
public:
    VectorCounter(std::size_t n, std::size_t capacity) : n_(n), mask_(capacity - 1), keys_(capacity * n), counts_(capacity, 0) {}

    static std::size_t capacity_for(std::uint64_t entries) {
        std::size_t cap = 16;
        while (cap < 2 * entries) cap <<= 1;
        return cap;
    }
    static std::uint64_t bytes_for(std::size_t n, std::size_t capacity) {
        return std::uint64_t(capacity) * (16 * n + 8);
    }

    void add(const i128* key) {
        std::size_t s = slot(key);
        if (counts_[s] == 0) std::copy(key, key + n_, keys_.begin() + std::ptrdiff_t(s * n_));
        ++counts_[s];
    }

    std::uint64_t find(const i128* key) const { return counts_[slot(key)]; }

    // the multiplicities, in slot order
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t s = 0; s < counts_.size(); ++s)
            if (counts_[s]) fn(keys_.data() + s * n_, counts_[s]);
    }

private:
    std::size_t slot(const i128* key) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::size_t i = 0; i < n_; ++i) {
            u128 v = u128(key[i]);
            h = mix64(h ^ std::uint64_t(v));
            h = mix64(h ^ std::uint64_t(v >> 64));
        }
        std::size_t s = std::size_t(h) & mask_;
        while (counts_[s] != 0 && !std::equal(key, key + n_, keys_.data() + s * n_)) s = (s + 1) & mask_;
        return s;
    }

    std::size_t n_;
    std::size_t mask_;
    std::vector<i128> keys_;
    std::vector<std::uint64_t> counts_;
};

// u128 accumulator that spills into a big integer instead of wrapping.
struct Accumulator {
    u128 small = 0;
    BigInt spill = 0;
    void add(u128 v) {
        u128 r;
        if (__builtin_add_overflow(small, v, &r)) {
            spill += to_big(small);
            small = v;
        } else {
            small = r;
        }
    }
    BigInt total() const { return spill + to_big(small); }
};

void check_split(const Split& split, std::size_t s) {
    if (split.first.empty() || split.second.empty()) fail(ErrorKind::precondition, "split has an empty block");
    std::vector<int> seen(s, 0);
    for (const auto* block : {&split.first, &split.second})
        for (auto j : *block) {
            if (j >= s) fail(ErrorKind::precondition, "split index " + std::to_string(j + 1) + " out of range");
            if (seen[j]++) fail(ErrorKind::precondition, "split index " + std::to_string(j + 1) + " repeated");
        }
    if (split.first.size() + split.second.size() != s) fail(ErrorKind::precondition, "split does not cover all variables");
}

struct MimResult {
    BigInt count;
    std::uint64_t bytes;
};

MimResult mim_window(const DiagonalSystem& F, std::int64_t lo, std::int64_t hi, const Split& split, const Budget& budget) {
    check_split(split, F.s());
    const std::uint64_t m = std::uint64_t(hi - lo + 1);
    const auto& small = split.first.size() <= split.second.size() ? split.first : split.second;
    const auto& large = split.first.size() <= split.second.size() ? split.second : split.first;
    const std::uint64_t small_tuples = sat_pow(m, small.size());
    const std::uint64_t large_tuples = sat_pow(m, large.size());
    if (small_tuples > budget.max_tuples || large_tuples > budget.max_tuples - std::min(budget.max_tuples, small_tuples))
        fail(ErrorKind::budget, "meet-in-the-middle enumeration of " + std::to_string(small_tuples) + " + " +
                                    std::to_string(large_tuples) + " tuples exceeds the tuple budget");
    const std::size_t cap = VectorCounter::capacity_for(small_tuples);
    const std::uint64_t bytes = VectorCounter::bytes_for(F.n(), cap);
    if (bytes > budget.max_bytes)
        fail(ErrorKind::budget, "hash table of " + std::to_string(bytes) + " bytes exceeds the memory budget");

    ValueTables t = build_tables(F, lo, hi);
    VectorCounter table(F.n(), cap);
    for (std::size_t x = 0; x < t.m; ++x) for_each_tuple(t, small, x, [&](const i128* v) { table.add(v); });

    std::vector<Accumulator> partial(t.m);
    parallel_for(t.m, [&](std::size_t x) {
        std::vector<i128> neg(F.n());
        Accumulator acc;
        for_each_tuple(t, large, x, [&](const i128* v) {
            for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -v[i];
            if (auto c = table.find(neg.data())) acc.add(c);
        });
        partial[x] = acc;
    });
    BigInt total = 0;
    for (const auto& p : partial) total += p.total();
    return {total, bytes + std::uint64_t(t.m) * F.s() * F.n() * 16};
}

void check_X(std::int64_t X) {
    if (X < 0) fail(ErrorKind::input, "X must be >= 0");
}

}  // namespace

Split default_split(std::size_t s) {
    Split sp;
    const std::size_t h = (s + 1) / 2;
    for (std::size_t j = 0; j < s; ++j) (j < h ? sp.first : sp.second).push_back(j);
    return sp;
}

CountReport count_zeros_brute(const DiagonalSystem& F, std::int64_t X, const Budget& budget) {
    check_X(X);
    auto t0 = Clock::now();
    const std::uint64_t tuples = sat_pow(std::uint64_t(2 * X + 1), F.s());
    if (tuples > budget.max_tuples)
        fail(ErrorKind::budget, "brute force needs " + std::to_string(tuples) +
                                    " tuples, above the budget; use count_zeros_mim");
    ValueTables t = build_tables(F, -X, X);
    std::vector<std::size_t> vars(F.s());
    std::iota(vars.begin(), vars.end(), 0);
    std::vector<std::uint64_t> partial(t.m, 0);
    const std::size_t n = F.n();
    parallel_for(t.m, [&](std::size_t x) {
        std::uint64_t c = 0;
        for_each_tuple(t, vars, x, [&](const i128* v) {
            bool zero = true;
            for (std::size_t i = 0; i < n && zero; ++i) zero = v[i] == 0;
            c += zero;
        });
        partial[x] = c;
    });
    BigInt total = 0;
    for (auto c : partial) total += c;
    return {total, CountMethod::brute, X, seconds_since(t0), std::uint64_t(t.m) * F.s() * n * 16};
}

CountReport count_zeros_mim(const DiagonalSystem& F, std::int64_t X, const Split& split, const Budget& budget) {
    check_X(X);
    auto t0 = Clock::now();
    MimResult r = mim_window(F, -X, X, split, budget);
    return {r.count, CountMethod::mim, X, seconds_since(t0), r.bytes};
}

CountReport count_zeros_mim(const DiagonalSystem& F, std::int64_t X, const Budget& budget) {
    if (F.s() < 2) fail(ErrorKind::precondition, "meet-in-the-middle needs s >= 2");
    return count_zeros_mim(F, X, default_split(F.s()), budget);
}

CountReport count_zeros(const DiagonalSystem& F, std::int64_t X, const Budget& budget) {
    check_X(X);
    if (sat_pow(std::uint64_t(2 * X + 1), F.s()) <= budget.max_tuples || F.s() < 2) return count_zeros_brute(F, X, budget);
    return count_zeros_mim(F, X, budget);
}

BigInt count_zeros_window(const DiagonalSystem& F, std::int64_t lo, std::int64_t hi, const Split& split,
                          const Budget& budget) {
    if (hi < lo) return 0;
    return mim_window(F, lo, hi, split, budget).count;
}

BigInt vinogradov_count_window(int b, int k_max, std::int64_t lo, std::int64_t hi, const Budget& budget) {
    if (b < 1 || k_max < 1) fail(ErrorKind::input, "b and k_max must be >= 1");
    if (hi < lo) return 0;
    const std::uint64_t m = std::uint64_t(hi - lo + 1);
    const std::uint64_t tuples = sat_pow(m, std::size_t(b));
    if (tuples > budget.max_tuples) fail(ErrorKind::budget, "Vinogradov enumeration of " + std::to_string(tuples) + " tuples exceeds the tuple budget");
    const std::uint64_t bytes = sat_mul(tuples, std::uint64_t(k_max) * 16 + 8);
    if (bytes > budget.max_bytes) fail(ErrorKind::budget, "Vinogradov key storage exceeds the memory budget");

    const std::size_t K = std::size_t(k_max);
    std::vector<i128> pw(m * K);
    for (std::uint64_t xi = 0; xi < m; ++xi)
        for (std::size_t j = 0; j < K; ++j) pw[xi * K + j] = pow_checked(lo + std::int64_t(xi), int(j + 1));

    // power-sum vectors of all ordered b-tuples, sorted, then multiplicities squared
    std::vector<i128> keys(tuples * K);
    std::vector<std::uint64_t> idx(std::size_t(b), 0);
    for (std::uint64_t t = 0; t < tuples; ++t) {
        i128* key = &keys[t * K];
        for (std::size_t j = 0; j < K; ++j) {
            i128 acc = 0;
            for (int r = 0; r < b; ++r) acc = add_checked(acc, pw[idx[std::size_t(r)] * K + j]);
            key[j] = acc;
        }
        for (int r = b - 1; r >= 0; --r) {
            if (++idx[std::size_t(r)] < m) break;
            idx[std::size_t(r)] = 0;
        }
    }
    std::vector<std::uint64_t> order(tuples);
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::uint64_t a, std::uint64_t c) {
        return std::lexicographical_compare(&keys[a * K], &keys[a * K] + K, &keys[c * K], &keys[c * K] + K);
    };
    std::sort(order.begin(), order.end(), less);
    BigInt total = 0;
    for (std::uint64_t i = 0; i < tuples;) {
        std::uint64_t j = i + 1;
        while (j < tuples && std::equal(&keys[order[i] * K], &keys[order[i] * K] + K, &keys[order[j] * K])) ++j;
        BigInt run = j - i;
        total += run * run;
        i = j;
    }
    return total;
}

BigInt vinogradov_count(int b, int k_max, std::int64_t X, const Budget& budget) {
    check_X(X);
    return vinogradov_count_window(b, k_max, 1, X, budget);
}

BigInt moment_count(const MomentSpec& spec, std::int64_t X, const Budget& budget) {
    check_X(X);
    if (spec.b < 1) fail(ErrorKind::input, "b must be >= 1");
    const std::size_t b = std::size_t(spec.b);
    RawSystem raw;
    raw.name = "moment";
    raw.k = spec.k.values();
    std::vector<std::int64_t> row(2 * b, 1);
    std::fill(row.begin() + std::ptrdiff_t(b), row.end(), -1);
    raw.u.assign(spec.k.size(), row);
    DiagonalSystem F = validate_system(raw);
    Split split;
    for (std::size_t j = 0; j < 2 * b; ++j) (j < b ? split.first : split.second).push_back(j);
    if (spec.box == Box::symmetric) return count_zeros_window(F, -X, X, split, budget);
    return count_zeros_window(F, 1, X, split, budget);
}

GrowthFit exponent_fit(const MomentSpec& spec, std::span<const std::int64_t> X_list, const Budget& budget) {
    if (X_list.size() < 3) fail(ErrorKind::precondition, "exponent_fit needs at least 3 values of X");
    GrowthFit fit;
    const int sigma = spec.k.sigma();
    std::vector<double> lx, ly;
    for (auto X : X_list) {
        if (X < 1) fail(ErrorKind::input, "exponent_fit needs X >= 1");
        BigInt c = moment_count(spec, X, budget);
        double cd = c.convert_to<double>();
        double ref = std::pow(double(X), spec.b) + std::pow(double(X), 2 * spec.b - sigma);
        fit.X.push_back(X);
        fit.counts.push_back(c);
        fit.ratios.push_back(cd / ref);
        lx.push_back(std::log(double(X)));
        ly.push_back(std::log(cd));
    }
    const double N = double(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / N;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / N;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    fit.fitted_constant = *std::max_element(fit.ratios.begin(), fit.ratios.end());
    return fit;
}

bool translation_invariance_check(int b, int k_max, std::int64_t X, std::int64_t c, const Budget& budget) {
    check_X(X);
    return vinogradov_count_window(b, k_max, 1 + c, X + c, budget) == vinogradov_count_window(b, k_max, 1, X, budget);
}

}  // namespace diagarcs
