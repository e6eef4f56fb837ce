#pragma once

#include "core/forms.hpp"
#include "core/wide.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace diagarcs {

using Complex = std::complex<double>;

// A double is an exact binary rational m 2^-e, so frac(alpha n) can be formed
// exactly for integer n before any rounding happens.
class ExactReal {
public:
    explicit ExactReal(double alpha);
    double frac_times(i128 n) const;  // frac(alpha n) in [0, 1)
    double value() const { return alpha_; }

private:
    double alpha_;
    std::int64_t mantissa_ = 0;
    int shift_ = 0;  // alpha = mantissa_ 2^-shift_
    bool integral_ = false;
};

Complex unit_root(double t);  // e(t) = exp(2 pi i t)
Complex unit_root(std::int64_t m, std::int64_t q);  // e(m/q), exact reduction of m mod q

// Neumaier-compensated complex sum.
class ComplexSum {
public:
    void add(Complex z);
    Complex value() const { return {re_ + cre_, im_ + cim_}; }

private:
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

Complex weyl_sum(const ExponentTuple& k, std::span<const double> alpha, std::int64_t X);

// Sum over |x| <= X of e(sum_i (a_i/q + beta_i) x^{k_i}); the rational part is exact.
Complex weyl_sum_split(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a,
                       std::span<const double> beta, std::int64_t X);

struct PolyPhase {
    std::vector<std::pair<int, double>> terms;  // (exponent, coefficient)

    static PolyPhase dense(std::span<const double> beta);  // sum_j beta_j t^j
    static PolyPhase sparse(std::vector<std::pair<int, double>> terms);
    // g_k: degrees 1..k-2 with coefficients alpha, plus theta t^k
    static PolyPhase missing_degree(int k, std::span<const double> alpha, double theta);
};

Complex poly_phase_sum(const PolyPhase& phase, std::int64_t lo, std::int64_t hi);

struct RationalPoint {
    std::vector<std::int64_t> a;
    std::int64_t q;
};

std::int64_t content(std::span<const std::int64_t> a, std::int64_t q);  // (a_1; ...; a_n; q)
bool in_A_n(const RationalPoint& p);

// Complete sums for one modulus with the power and root tables built once.
class CompleteSumTable {
public:
    CompleteSumTable(const ExponentTuple& k, std::int64_t q);
    Complex operator()(std::span<const std::int64_t> c) const;  // c already reduced mod q
    std::int64_t q() const { return q_; }

private:
    std::int64_t q_;
    std::size_t n_;
    std::vector<std::int64_t> powers_;  // powers_[r*n + i] = r^{k_i} mod q, r = 0..q-1
    std::vector<Complex> roots_;        // e(m/q)
};

Complex complete_sum(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a);
Complex complete_sum_system(const DiagonalSystem& F, std::int64_t q, std::span<const std::int64_t> a);
Complex complete_sum_system_direct(const DiagonalSystem& F, std::int64_t q, std::span<const std::int64_t> a);

Complex system_weyl_sum(const DiagonalSystem& F, std::span<const double> alpha, std::int64_t X);
Complex system_weyl_sum_direct(const DiagonalSystem& F, std::span<const double> alpha, std::int64_t X);

struct BoundSample {
    std::int64_t q;
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> w;  // empty for part (i)
    double abs_sum;
    double ratio;
};

struct BoundReport {
    std::vector<BoundSample> samples;
    double fitted_constant;  // max ratio over q <= 20
    double max_ratio_large;  // max ratio over q > 20
    double max_ratio;
    bool holds;              // large-q max <= 2 * fitted constant
};

double complete_sum_ratio(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a, double eps);
BoundReport complete_sum_bound_check(const ExponentTuple& k, std::span<const std::int64_t> q_list, int trials, double eps,
                                     std::uint64_t seed, bool weighted);

double psi_k(int k_top, double theta, double mu, std::int64_t X);

struct PsiStar {
    double value;
    double argmax_mu;
    bool lower_bound = true;  // grid maximum, never above the true supremum
};

PsiStar psi_star(int k_top, double theta, std::int64_t X, std::int64_t grid_size);

double vdc_ratio(const std::array<double, 3>& alpha, std::int64_t X);

struct StabilitySweep {
    std::vector<std::int64_t> X;
    std::vector<double> ratios;
    double first_half_max;
    double second_half_max;
    bool stable;  // second-half max <= 2 * first-half max
};

StabilitySweep stability_of(std::vector<std::int64_t> X, std::vector<double> ratios);
StabilitySweep vdc_sweep(int samples, std::int64_t X_min, std::int64_t X_max, std::uint64_t seed);

}  // namespace diagarcs
