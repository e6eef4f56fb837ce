#pragma once

#include "core/exp_sums.hpp"
#include "core/forms.hpp"
#include "core/oscillatory.hpp"
#include "core/singular_series.hpp"
#include "core/wide.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace diagarcs {

using Rational = boost::multiprecision::cpp_rational;

struct ArcParams {
    std::int64_t X;
    Fraction tau;
    std::int64_t Q;   // floor(X^tau), exact
    std::int64_t Q0;  // 2Q
};

// tau must lie in [1/(n k_n), 1].
ArcParams make_arc_params(std::int64_t X, Fraction tau, const ExponentTuple& k);
std::int64_t floor_root_power(std::int64_t X, Fraction tau);  // floor(X^{num/den})

struct ArcLabel {
    bool major;
    std::int64_t q = 0;
    std::vector<std::int64_t> a;  // in [1, q]^n, content 1
};

// Smallest q, then lexicographically smallest a. Comparisons are exact.
ArcLabel classify(const ArcParams& params, const ExponentTuple& k, std::span<const double> alpha);
// Every (q <= Q, a in A_n(q)) tested in turn; same tie-break.
ArcLabel classify_brute(const ArcParams& params, const ExponentTuple& k, std::span<const double> alpha);

struct Arc {
    std::int64_t q;
    std::vector<std::int64_t> a;
};

std::vector<Arc> major_arcs(const ArcParams& params, const ExponentTuple& k);

struct DisjointnessReport {
    bool disjoint;
    bool by_criterion;  // X^{k_1} >= 2 Q^2 settled it without pairwise checks
    std::optional<std::pair<Arc, Arc>> overlap;
};

DisjointnessReport check_disjoint(const ArcParams& params, const ExponentTuple& k);

struct RationalApprox {
    BigInt b;
    BigInt q;
};

// Last continued-fraction convergent of theta with denominator <= Q_max;
// |theta - b/q| <= 1/(q Q_max).
RationalApprox best_rational_approx(double theta, std::int64_t Q_max);
RationalApprox best_rational_approx(const Rational& theta, std::int64_t Q_max);
// Convergents and semiconvergents with denominator <= Q_max, ascending q.
std::vector<RationalApprox> convergent_candidates(const Rational& theta, const BigInt& Q_max);
Rational exact_rational(double x);

struct CoordinateApprox {
    BigInt b;
    BigInt q;
};

struct CombineResult {
    bool accepted;
    std::string diagnostic;  // reason for rejection
    BigInt q;
    std::vector<BigInt> a;
    std::vector<Rational> beta;  // alpha - a/q exactly
    BigInt h;                    // h(q, a, w)
};

// approx[i] is read only for coordinates with k_i >= 2.
CombineResult combine_approx(std::span<const std::int64_t> w, std::span<const CoordinateApprox> approx,
                             std::span<const Rational> alpha, const ExponentTuple& k, std::int64_t X,
                             std::span<const double> lambda);

// h with (w . a)/q = c/h in lowest terms
BigInt h_of(const BigInt& q, std::span<const BigInt> a, std::span<const std::int64_t> w);

bool cond_beta_holds(const ExponentTuple& k, std::span<const double> gamma, double q_frak, double X);
double xi(const ExponentTuple& k, std::span<const double> beta, double X);

struct MajorError {
    Complex main_term;
    Complex actual;
    double error;
    double budget;
    double ratio;  // error / budget
};

// Dense phase of degree k: a and beta have k entries.
MajorError weyl_major_error(int k, std::int64_t q, std::span<const std::int64_t> a, std::span<const double> beta,
                            std::int64_t X, double eps = 0.1);
MajorError system_major_error(const DiagonalSystem& F, std::int64_t q, std::span<const std::int64_t> a,
                              std::span<const double> beta, std::int64_t X, double eps = 0.1);

struct MajorSample {
    int k;
    std::int64_t X;
    std::int64_t q;
    std::vector<std::int64_t> a;
    std::vector<double> beta;
    MajorError result;
};

struct MajorSweep {
    std::vector<MajorSample> samples;  // ascending X
    StabilitySweep stability;
};

MajorSweep weyl_major_sweep(std::span<const int> degrees, std::int64_t q_max, std::int64_t X_min, std::int64_t X_max,
                            int samples, std::uint64_t seed = 0, double eps = 0.1);

struct MajorArcIntegral {
    Complex value;
    double abs_error;
    std::size_t arcs;
    bool overlapping;
    std::uint64_t evaluations;
};

MajorArcIntegral major_arc_integral(const DiagonalSystem& F, const ArcParams& params, bool allow_overlap = false,
                                    std::uint64_t max_evaluations = 200'000'000);

enum class SingularIntegralRoute { automatic, truncated, smoothed };

struct MainTermOptions {
    SingularIntegralRoute route = SingularIntegralRoute::automatic;
    double U = 1000;
    double tol = 1e-6;
    double T = 20;
    std::uint64_t samples = 100'000'000;
    std::uint64_t seed = 0;
    std::int64_t Q_cut = 128;
    double eps = 0.1;
};

struct MainTerm {
    double value;
    double abs_error;
    int exponent;  // s - sigma(k)
    QuadratureResult singular_integral;
    SeriesApproximation singular_series;
};

MainTerm main_term(const DiagonalSystem& F, std::int64_t X, const MainTermOptions& opt = {});
// Singular integral with the route chosen as main_term would choose it.
QuadratureResult singular_integral(const DiagonalSystem& F, const MainTermOptions& opt = {});

struct RegionFlags {
    bool in_m3, in_W3, in_m2, in_W2, in_major, in_L;
    bool in_n1, in_n2, in_n3;
};

// k = (1, 3, 5) and tau = 5/8 throughout.
RegionFlags region_135(const std::array<double, 3>& alpha, std::int64_t X, const std::array<std::int64_t, 3>& w);
// One-dimensional predicates on theta reduced into [1/Q0, 1 + 1/Q0).
bool in_m3(double theta, std::int64_t X);
bool in_W3(double theta, std::int64_t X);
bool in_m2(double theta, std::int64_t X);
bool in_W2(double theta, std::int64_t X);

struct RegionSweep {
    std::int64_t X;
    std::uint64_t points;
    std::uint64_t m3_violations;     // outside m3 but not in W3
    std::uint64_t m2_violations;     // outside m2 but not in W2
    std::uint64_t cover_violations;  // minor but in no n_j
    std::uint64_t minor_points;
    std::uint64_t m2_outside;        // points not in m2, so the inclusion was really exercised
    std::uint64_t m3_outside;
    bool m3_vacuous;  // X^{1/8}/5 < 1: m3 is the whole box
};

RegionSweep region_sweep(std::int64_t X, std::uint64_t points, const std::array<std::int64_t, 3>& w,
                         std::uint64_t seed = 0);

}  // namespace diagarcs
