#pragma once

#include "core/budget.hpp"
#include "core/exp_sums.hpp"
#include "core/forms.hpp"
#include "core/wide.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace diagarcs {

inline constexpr std::uint64_t kMaxResidueTuples = 100'000'000;  // q^n for one T(q)

// T(q) = q^{-s} sum_{a in A_n(q)} S[F](q; a), real part after the reality check.
double T_q(const DiagonalSystem& F, std::int64_t q);
Complex T_q_complex(const DiagonalSystem& F, std::int64_t q);  // no reality check

struct SeriesApproximation {
    double partial_sum;
    std::int64_t Q_cut;
    double eps;
    double fitted_constant;  // max |T(q)| / q^e over [Q/2, Q], e = n - s/k_n + eps
    double tail_report;      // C Q^{e+1} / |e+1|, the integral of C q^e beyond Q
    std::vector<std::pair<std::int64_t, double>> per_q_terms;
};

SeriesApproximation series_truncated(const DiagonalSystem& F, std::int64_t Q_cut, double eps = 0.1);

// M(q) = #{x in (Z/q)^s : F(x) = 0 mod q} by convolving residue distributions.
BigInt count_mod(const DiagonalSystem& F, std::int64_t q, const Budget& budget = {});
// Plain enumeration of (Z/q)^s, kept as an independent check; q^s <= 1e9.
BigInt count_mod_direct(const DiagonalSystem& F, std::int64_t q);

struct EulerCheck {
    double lhs;  // sum_{h=0}^{H} T(p^h)
    double rhs;  // p^{H(n-s)} M(p^H)
    bool holds;  // within 1e-8 relative
};

EulerCheck euler_identity_check(const DiagonalSystem& F, std::int64_t p, int H, const Budget& budget = {});

int p_valuation(const BigInt& x, std::int64_t p);  // x != 0
BigInt minor_determinant(const DiagonalSystem& F, std::span<const BigInt> x, std::span<const std::size_t> columns);

// Newton iteration on the chosen minor; seed must satisfy F = 0 mod p^{2v+1},
// v the valuation of the minor determinant. Result is reduced mod p^H.
std::vector<BigInt> hensel_lift(const DiagonalSystem& F, std::int64_t p, std::span<const BigInt> seed,
                                std::span<const std::size_t> minor_columns, int H);

struct PadicCertificate {
    std::int64_t p;
    int u_p;                          // 2 v_p + 1
    std::vector<BigInt> solution;     // mod p^{u_p}
    int v_p;
    std::vector<std::size_t> minor_columns;  // 0-based
    bool lifted_check;                // lift to p^{u_p + 3} verified independently
    std::vector<BigInt> lifted;
};

struct PadicSearch {
    std::optional<PadicCertificate> certificate;
    int max_level;           // largest u searched
    bool exhaustive;         // every level up to max_level enumerated completely
    std::uint64_t points;    // residue tuples examined
};

// Levels u = 1, 3, 5, ...; a level is enumerated in lexicographic order
// (last coordinate fastest) when it fits the point budget, otherwise sampled.
PadicSearch padic_search(const DiagonalSystem& F, std::int64_t p, std::uint64_t max_points = 4'000'000,
                         std::uint64_t seed = 0);

bool is_prime(std::int64_t p);

}  // namespace diagarcs
