#pragma once

#include "core/budget.hpp"
#include "core/forms.hpp"
#include "core/wide.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace diagarcs {

enum class CountMethod { brute, mim };
const char* to_string(CountMethod m);

struct CountReport {
    BigInt count;
    CountMethod method;
    std::int64_t X;
    double wall_time;           // seconds
    std::uint64_t memory_peak;  // bytes, approximate
};

// Two blocks of 0-based variable indices partitioning {0..s-1}.
struct Split {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
};

Split default_split(std::size_t s);  // ceil(s/2) | floor(s/2) in index order

CountReport count_zeros_brute(const DiagonalSystem& F, std::int64_t X, const Budget& budget = {});
CountReport count_zeros_mim(const DiagonalSystem& F, std::int64_t X, const Split& split, const Budget& budget = {});
CountReport count_zeros_mim(const DiagonalSystem& F, std::int64_t X, const Budget& budget = {});
// brute when (2X+1)^s fits the tuple budget, otherwise MIM with the default split
CountReport count_zeros(const DiagonalSystem& F, std::int64_t X, const Budget& budget = {});

// Zeros with every variable in [lo, hi].
BigInt count_zeros_window(const DiagonalSystem& F, std::int64_t lo, std::int64_t hi, const Split& split,
                          const Budget& budget = {});

BigInt vinogradov_count(int b, int k_max, std::int64_t X, const Budget& budget = {});
BigInt vinogradov_count_window(int b, int k_max, std::int64_t lo, std::int64_t hi, const Budget& budget = {});

enum class Box { symmetric, positive };

struct MomentSpec {
    int b;
    ExponentTuple k;
    Box box;
};

BigInt moment_count(const MomentSpec& spec, std::int64_t X, const Budget& budget = {});

struct GrowthFit {
    std::vector<std::int64_t> X;
    std::vector<BigInt> counts;
    std::vector<double> ratios;  // count / (X^b + X^{2b - sigma})
    double slope;
    double intercept;
    double fitted_constant;  // max ratio
};

GrowthFit exponent_fit(const MomentSpec& spec, std::span<const std::int64_t> X_list, const Budget& budget = {});

bool translation_invariance_check(int b, int k_max, std::int64_t X, std::int64_t c, const Budget& budget = {});

}  // namespace diagarcs
