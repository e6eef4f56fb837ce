#pragma once

#include "core/exp_sums.hpp"
#include "core/forms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace diagarcs {

enum class IntegralRoute { truncated_iterated, smoothed_mc };
const char* to_string(IntegralRoute r);

struct QuadratureResult {
    Complex value;
    double abs_error_estimate = 0;
    std::uint64_t evaluations = 0;
    IntegralRoute route = IntegralRoute::truncated_iterated;
    double tail_bound = 0;      // truncated route: estimated mass outside [-U, U]^n
    double standard_error = 0;  // smoothed route
    double bias_estimate = 0;   // smoothed route: |J_T - J_{T/2}| from the same samples
};

inline constexpr double kOscillatoryTol = 1e-10;
inline constexpr std::uint64_t kMaxEvaluations = 400'000'000;

// int_{-1}^{1} e(sum_i beta_i (X t)^{k_i}) dt
QuadratureResult v_k(const ExponentTuple& k, std::span<const double> beta, double X);
// prod_j v_k(k, u_j . beta, X)
QuadratureResult v_system(const DiagonalSystem& F, std::span<const double> beta, double X);

struct DecaySample {
    std::vector<double> beta;
    double l1;         // sum |beta_i|
    double abs_value;  // |v_k(beta; 1)|
    double statistic;  // abs_value (1 + l1)^{1/k_n}
};

struct DecayReport {
    std::vector<DecaySample> samples;  // sorted by l1 ascending
    double max_statistic;
    double first_half_max;
    double second_half_max;
    bool stable;
};

DecayReport decay_check(const ExponentTuple& k, int sample_count, std::uint64_t seed = 0);

QuadratureResult singular_integral_truncated(const DiagonalSystem& F, double U, double tol);
QuadratureResult singular_integral_smoothed(const DiagonalSystem& F, double T, std::uint64_t samples,
                                            std::uint64_t seed = 0);

struct RealCertificate {
    std::vector<double> eta;
    double residual;
    double jacobian_sigma_min;
    std::vector<std::size_t> minor_columns;  // 0-based
};

std::optional<RealCertificate> real_nonsingular_search(const DiagonalSystem& F, int attempts, std::uint64_t seed = 0);

}  // namespace diagarcs
