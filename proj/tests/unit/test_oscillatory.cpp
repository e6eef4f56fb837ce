#include "core/errors.hpp"
#include "core/oscillatory.hpp"
#include "core/parallel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace diagarcs;

TEST_CASE("v_k against closed forms") {
    const ExponentTuple k1({1});
    std::vector<double> zero{0.0};
    CHECK(std::abs(v_k(k1, zero, 1).value - Complex(2, 0)) < 1e-10);
    for (double B : {0.5, 0.3, 2.7, 40.0}) {
        std::vector<double> b{B};
        const double want = std::sin(2 * std::numbers::pi * B) / (std::numbers::pi * B);
        const auto r = v_k(k1, b, 1);
        CHECK(std::abs(r.value - Complex(want, 0)) < 1e-9);
        CHECK(r.abs_error_estimate >= 0);
    }
    // scaling: v_k(beta; X) with X t substituted
    std::vector<double> b{0.25};
    const double want = std::sin(2 * std::numbers::pi * 0.25 * 3) / (std::numbers::pi * 0.25 * 3);
    CHECK(std::abs(v_k(k1, b, 3).value - Complex(want, 0)) < 1e-9);
}

TEST_CASE("v_k against Simpson and its symmetries") {
    const ExponentTuple k({2, 3});
    std::vector<double> b{3.1, -1.7}, nb{-3.1, 1.7};
    const auto ref = oracle::simpson(
        [](double t) { return oracle::e(3.1 * t * t - 1.7 * t * t * t); }, -1, 1, 20000);
    const auto v = v_k(k, b, 1).value;
    CHECK(std::abs(v - ref) < 1e-8);
    CHECK(std::abs(v_k(k, nb, 1).value - std::conj(v)) < 1e-10);
    CHECK(std::abs(v) <= 2 + 1e-12);

    std::vector<double> big{100.0};
    const auto r = v_k(ExponentTuple({2}), big, 1);
    CHECK(std::abs(r.value) == doctest::Approx(0.0696).epsilon(0.01));
    CHECK(std::abs(r.value) * std::sqrt(101.0) < 1.0);
}

TEST_CASE("v_system") {
    auto F = oracle::sys({2}, {{1, -1}});
    std::vector<double> zero{0.0};
    CHECK(std::abs(v_system(F, zero, 1).value - Complex(4, 0)) < 1e-9);
    std::vector<double> b{1.3};
    const auto single = v_k(ExponentTuple({2}), b, 1).value;
    const auto r = v_system(F, b, 1).value;
    CHECK(std::abs(r - Complex(std::norm(single), 0)) < 1e-9);
    CHECK(r.real() >= 0);
    // two-dimensional Simpson over [-1,1]^2
    const auto inner = [](double t1) {
        return oracle::simpson([t1](double t2) { return oracle::e(1.3 * (t1 * t1 - t2 * t2)); }, -1, 1, 800);
    };
    const auto direct = oracle::simpson(inner, -1, 1, 800);
    CHECK(std::abs(r - direct) < 1e-8);
}

TEST_CASE("decay statistic") {
    const auto lin = decay_check(ExponentTuple({1}), 30, 0);
    CHECK(lin.samples.size() == 30);
    for (const auto& s : lin.samples) {
        CHECK(s.statistic <= 2 / std::numbers::pi * (1 + 1 / s.l1) + 1e-8);
    }
    for (std::size_t i = 1; i < lin.samples.size(); ++i) CHECK(lin.samples[i - 1].l1 <= lin.samples[i].l1);
    const auto odd = decay_check(ExponentTuple({1, 3, 5}), 40, 1);
    CHECK(std::isfinite(odd.max_statistic));
}

TEST_CASE("truncated singular integral of x1 - x2") {
    auto F = oracle::sys({1}, {{1, -1}});
    const auto r = singular_integral_truncated(F, 100, 1e-9);
    CHECK(r.route == IntegralRoute::truncated_iterated);
    CHECK(std::abs(r.value.real() - 2) <= r.tail_bound + 1e-6);
    CHECK(r.tail_bound < 0.02);
    CHECK_THROWS_AS(singular_integral_truncated(oracle::sys({2}, {{1, -1}}), 100, 1e-9), Error);
    CHECK_THROWS_AS(singular_integral_truncated(oracle::sys({1, 2}, {{1, 1, -1}, {1, 2, -1}}), 10, 1e-6), Error);
}

TEST_CASE("smoothed singular integral") {
    auto F = oracle::sys({1}, {{1, -1}});
    const double T = 10;
    const auto a = singular_integral_smoothed(F, T, 1'000'000, 7);
    CHECK(a.route == IntegralRoute::smoothed_mc);
    // J_T for x1 - x2 is 2 - 1/(3T) exactly
    CHECK(std::abs(a.value.real() - (2 - 1 / (3 * T))) <= 3 * a.standard_error);
    CHECK(a.value.real() >= 0);
    CHECK(a.abs_error_estimate >= 3 * a.standard_error);

    const auto b = singular_integral_smoothed(F, T, 1'000'000, 7);
    CHECK(a.value == b.value);
    CHECK(a.standard_error == b.standard_error);

    set_thread_count(1);
    const auto c = singular_integral_smoothed(F, T, 200'000, 3);
    set_thread_count(4);
    const auto d = singular_integral_smoothed(F, T, 200'000, 3);
    set_thread_count(0);
    CHECK(c.value == d.value);

    auto G = oracle::sys({2}, {{1, 1}});
    for (std::uint64_t seed = 0; seed < 3; ++seed) CHECK(singular_integral_smoothed(G, 5, 10'000, seed).value.real() >= 0);
    CHECK_THROWS_AS(singular_integral_smoothed(F, T, 0, 0), Error);
    CHECK_THROWS_AS(singular_integral_smoothed(F, 0.5, 100, 0), Error);
}

TEST_CASE("real nonsingular zeros") {
    const auto lin = real_nonsingular_search(oracle::sys({1}, {{1, -1}}), 16, 0);
    REQUIRE(lin.has_value());
    CHECK(std::abs(lin->eta[0] - lin->eta[1]) < 1e-8);
    CHECK(lin->residual <= 1e-8);
    CHECK(lin->jacobian_sigma_min > 1e-6);

    CHECK_FALSE(real_nonsingular_search(oracle::sys({2}, {{1, 1}}), 64, 0).has_value());

    // x1 + x2 = 0 forces x1^3 + 2 x2^3 = -x1^3, so the only real zero is the singular origin
    CHECK_FALSE(real_nonsingular_search(oracle::sys({1, 3}, {{1, 1}, {1, 2}}), 64, 0).has_value());
    // with a third variable the same pair of degrees has nonsingular zeros
    auto F = oracle::sys({1, 3}, {{1, 1, 1}, {1, 2, -1}});
    const auto c = real_nonsingular_search(F, 64, 0);
    REQUIRE(c.has_value());
    const auto& x = c->eta;
    CHECK(std::abs(x[0] + x[1] + x[2]) < 1e-7);
    CHECK(std::abs(x[0] * x[0] * x[0] + 2 * x[1] * x[1] * x[1] - x[2] * x[2] * x[2]) < 1e-7);
    CHECK(c->jacobian_sigma_min > 1e-6);
    auto toy = oracle::sys({1, 2}, {{1, 1, 1, 1, -1, -1, -2}, {1, 2, -1, -1, 1, 1, -2}});
    const auto t = real_nonsingular_search(toy, 64, 0);
    REQUIRE(t.has_value());
    CHECK(t->residual <= 1e-8);
    for (double v : t->eta) CHECK(std::abs(v) <= 1.0);
}
