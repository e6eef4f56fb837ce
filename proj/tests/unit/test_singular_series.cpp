#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/singular_series.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace diagarcs;

namespace {

DiagonalSystem random_system(BlockRng& rng) {
    const int n = int(rng.integer(1, 2));
    const std::size_t s = std::size_t(rng.integer(2, 5));
    std::vector<int> k{int(rng.integer(1, 3))};
    if (n == 2) k.push_back(k[0] + int(rng.integer(1, 2)));
    std::vector<std::vector<std::int64_t>> u(std::size_t(n), std::vector<std::int64_t>(s, 0));
    for (auto& row : u)
        for (auto& v : row) {
            v = rng.integer(-4, 4);
            if (v == 0) v = 3;
        }
    return oracle::sys(k, u);
}

BigInt eval_mod(const DiagonalSystem& F, std::size_t i, const std::vector<BigInt>& x, const BigInt& m) {
    BigInt v = 0;
    for (std::size_t j = 0; j < F.s(); ++j) {
        BigInt p = 1;
        for (int e = 0; e < F.k()[i]; ++e) p *= x[j];
        v += F.coeff(i, j) * p;
    }
    v %= m;
    if (v < 0) v += m;
    return v;
}

}  // namespace

TEST_CASE("T(q) matches the definition") {
    auto sq = oracle::sys({2}, {{1, -1}});
    CHECK(T_q(sq, 1) == doctest::Approx(1.0));
    CHECK(std::abs(T_q(sq, 2)) < 1e-12);
    BlockRng rng(21, 0);
    for (int t = 0; t < 8; ++t) {
        auto F = random_system(rng);
        for (std::int64_t q : {2, 3, 4, 5, 6})
            CHECK(std::abs(T_q(F, q) - oracle::T(F, q)) <= 1e-9 * std::max(1.0, std::abs(oracle::T(F, q))));
    }
}

TEST_CASE("T is multiplicative and real") {
    BlockRng rng(22, 0);
    for (int t = 0; t < 20; ++t) {
        auto F = random_system(rng);
        for (auto [q1, q2] : {std::pair<std::int64_t, std::int64_t>{2, 3}, {4, 5}, {3, 7}}) {
            const double prod = T_q(F, q1) * T_q(F, q2);
            CHECK(std::abs(T_q(F, q1 * q2) - prod) <= 1e-9 * std::max(1.0, std::abs(prod)));
            CHECK(std::abs(T_q_complex(F, q1 * q2).imag()) <= 1e-9 * std::pow(double(q1 * q2), double(F.n())));
        }
    }
}

TEST_CASE("truncated singular series") {
    CHECK_THROWS_AS(series_truncated(oracle::sys({1}, {{1, -1}}), 16), Error);
    auto toy = oracle::sys({1, 2}, {{1, 1, 1, 1, -1, -1, -2}, {1, 2, -1, -1, 1, 1, -2}});
    std::vector<double> S;
    for (std::int64_t Q : {8, 16, 32, 64}) {
        const auto r = series_truncated(toy, Q, 0.1);
        double resum = 0;
        for (auto [q, v] : r.per_q_terms) resum += v;
        CHECK(r.per_q_terms.size() == std::size_t(Q));
        CHECK(resum == doctest::Approx(r.partial_sum).epsilon(1e-12));
        CHECK(r.tail_report > 0);
        S.push_back(r.partial_sum);
    }
    for (std::size_t i = 2; i < S.size(); ++i) CHECK(std::abs(S[i] - S[i - 1]) < std::abs(S[i - 1] - S[i - 2]));
    CHECK(S.back() == doctest::Approx(1.036).epsilon(0.02));
}

TEST_CASE("solutions modulo q") {
    auto sq = oracle::sys({2}, {{1, -1}});
    CHECK(count_mod(sq, 1) == 1);
    CHECK(count_mod(sq, 3) == 5);
    for (std::int64_t p : {3, 5, 7, 11}) CHECK(count_mod(sq, p) == 2 * p - 1);
    BlockRng rng(23, 0);
    for (int t = 0; t < 10; ++t) {
        auto F = random_system(rng);
        for (std::int64_t q : {4, 6, 9}) {
            CHECK(count_mod(F, q) == oracle::count_residues(F, q));
            CHECK(count_mod(F, q) == count_mod_direct(F, q));
        }
    }
}

TEST_CASE("finite Euler identity") {
    auto sq = oracle::sys({2}, {{1, -1}});
    const auto e = euler_identity_check(sq, 3, 1);
    CHECK(e.holds);
    CHECK(e.rhs == doctest::Approx(5.0 / 3.0));
    CHECK(e.lhs == doctest::Approx(1 + oracle::T(sq, 3)));
    CHECK(euler_identity_check(sq, 2, 2).holds);
    // linear forms in coprime coefficients: T(p^h) = 0 for h >= 1
    auto lin = oracle::sys({1}, {{1, 1, -1}});
    const auto l = euler_identity_check(lin, 5, 2);
    CHECK(l.holds);
    CHECK(l.rhs == doctest::Approx(1.0));
    BlockRng rng(24, 0);
    for (int t = 0; t < 6; ++t) {
        auto F = random_system(rng);
        for (std::int64_t p : {2, 3}) CHECK(euler_identity_check(F, p, 2).holds);
    }
}

TEST_CASE("Hensel lifting") {
    auto sq = oracle::sys({2}, {{1, -1}});
    std::vector<std::size_t> col0{0};
    {
        std::vector<BigInt> seed{1, 1};
        const auto x = hensel_lift(sq, 5, seed, col0, 3);
        CHECK(eval_mod(sq, 0, x, 125) == 0);
        CHECK(x[0] % 5 == 1);
        CHECK(x[1] % 5 == 1);
    }
    {
        // derivative 2 x1 has 2-adic valuation 1, so the seed must hold mod 2^3
        std::vector<BigInt> seed{1, 3};
        const auto x = hensel_lift(sq, 2, seed, col0, 6);
        CHECK(eval_mod(sq, 0, x, 64) == 0);
        CHECK(x[0] % 4 == 1);
        CHECK(x[1] % 4 == 3);
        std::vector<BigInt> bad{1, 5};  // 1 - 25 = -24, not 0 mod 16 but 0 mod 8
        CHECK_NOTHROW(hensel_lift(sq, 2, bad, col0, 6));
        std::vector<BigInt> worse{1, 2};
        CHECK_THROWS_AS(hensel_lift(sq, 2, worse, col0, 6), Error);
    }
    std::vector<BigInt> off{1, 2};
    CHECK_THROWS_AS(hensel_lift(sq, 5, off, col0, 3), Error);
}

TEST_CASE("p-adic certificates") {
    auto sq = oracle::sys({2}, {{1, -1}});
    const auto s7 = padic_search(sq, 7);
    REQUIRE(s7.certificate.has_value());
    CHECK(s7.certificate->solution == std::vector<BigInt>{1, 1});
    CHECK(s7.certificate->v_p == 0);
    CHECK(s7.certificate->u_p == 1);
    CHECK(s7.certificate->lifted_check);

    const auto s3 = padic_search(oracle::sys({2}, {{1, 1}}), 3);
    CHECK_FALSE(s3.certificate.has_value());
    CHECK(s3.max_level >= 3);

    auto toy = oracle::sys({1, 2}, {{1, 1, 1, 1, -1, -1, -2}, {1, 2, -1, -1, 1, 1, -2}});
    for (std::int64_t p : {2, 3, 5, 7}) {
        const auto r = padic_search(toy, p, 200'000);
        REQUIRE(r.certificate.has_value());
        const auto& c = *r.certificate;
        CHECK(c.u_p == 2 * c.v_p + 1);
        BigInt m = 1;
        for (int i = 0; i < c.u_p; ++i) m *= p;
        for (std::size_t i = 0; i < toy.n(); ++i) CHECK(eval_mod(toy, i, c.solution, m) == 0);
        CHECK(p_valuation(minor_determinant(toy, c.solution, c.minor_columns), p) == c.v_p);
    }
}
