#pragma once

// Independent reference computations for the tests. Everything here is the
// slowest obvious loop over the definition, written without the library's helpers.

#include "core/forms.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline diagarcs::DiagonalSystem sys(std::vector<int> k, std::vector<std::vector<std::int64_t>> u) {
    return diagarcs::validate_system({"t", std::move(k), std::move(u)});
}

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline cd e(double t) { return std::polar(1.0, 2 * std::numbers::pi * t); }

// Calls f on every point of [lo, hi]^s, last coordinate fastest.
inline void each_tuple(std::size_t s, std::int64_t lo, std::int64_t hi,
                       const std::function<void(const std::vector<std::int64_t>&)>& f) {
    std::vector<std::int64_t> x(s, lo);
    for (;;) {
        f(x);
        std::size_t i = s;
        while (i > 0) {
            if (++x[i - 1] <= hi) break;
            x[i - 1] = lo;
            --i;
        }
        if (i == 0) return;
    }
}

inline bool is_zero(const diagarcs::DiagonalSystem& F, const std::vector<std::int64_t>& x, std::int64_t mod = 0) {
    for (std::size_t i = 0; i < F.n(); ++i) {
        __int128 v = 0;
        for (std::size_t j = 0; j < F.s(); ++j) v += __int128(F.coeff(i, j)) * ipow(x[j], F.k()[i]);
        if (mod ? v % mod != 0 : v != 0) return false;
    }
    return true;
}

inline std::uint64_t count_box(const diagarcs::DiagonalSystem& F, std::int64_t X) {
    std::uint64_t c = 0;
    each_tuple(F.s(), -X, X, [&](const auto& x) { c += is_zero(F, x); });
    return c;
}

inline std::uint64_t count_residues(const diagarcs::DiagonalSystem& F, std::int64_t q) {
    std::uint64_t c = 0;
    each_tuple(F.s(), 0, q - 1, [&](const auto& x) { c += is_zero(F, x, q); });
    return c;
}

// sum_{x=1}^{q} e(sum_i a_i x^{k_i} / q)
inline cd complete_sum(const std::vector<int>& k, std::int64_t q, const std::vector<std::int64_t>& a) {
    cd s = 0;
    for (std::int64_t x = 1; x <= q; ++x) {
        __int128 m = 0;
        for (std::size_t i = 0; i < k.size(); ++i) m += __int128(a[i]) * ipow(x, k[i]);
        s += e(double(((m % q) + q) % q) / double(q));
    }
    return s;
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// q^{-s} sum over a in [1,q]^n with content 1 of prod_j S(q; u_j a)
inline double T(const diagarcs::DiagonalSystem& F, std::int64_t q) {
    cd total = 0;
    each_tuple(F.n(), 1, q, [&](const auto& a) {
        std::int64_t g = q;
        for (auto v : a) g = gcd(g, v);
        if (g != 1) return;
        cd prod = 1;
        for (std::size_t j = 0; j < F.s(); ++j) {
            std::vector<std::int64_t> c(F.n());
            for (std::size_t i = 0; i < F.n(); ++i) c[i] = F.coeff(i, j) * a[i];
            prod *= complete_sum(F.k().values(), q, c);
        }
        total += prod;
    });
    return total.real() / std::pow(double(q), double(F.s()));
}

// Composite Simpson on [a, b] with m (even) intervals.
inline cd simpson(const std::function<cd(double)>& f, double a, double b, int m) {
    const double h = (b - a) / m;
    cd s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
