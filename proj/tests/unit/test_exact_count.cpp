#include "core/errors.hpp"
#include "core/exact_count.hpp"
#include "core/parallel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace diagarcs;

TEST_CASE("x1^2 - x2^2 has 4X+1 zeros") {
    auto F = oracle::sys({2}, {{1, -1}});
    CHECK(count_zeros_brute(F, 2).count == 9);
    CHECK(count_zeros_mim(F, 2, Split{{0}, {1}}).count == 9);
    for (std::int64_t X = 0; X <= 50; ++X) {
        CHECK(count_zeros_brute(F, X).count == 4 * X + 1);
        CHECK(count_zeros_mim(F, X).count == 4 * X + 1);
    }
}

TEST_CASE("X = 0 counts only the origin") {
    auto F = oracle::sys({1, 3}, {{1, 2, -5}, {3, -1, 1}});
    CHECK(count_zeros_brute(F, 0).count == 1);
    CHECK(count_zeros(F, 0).count == 1);
}

TEST_CASE("meet in the middle on x1 + x2 - x3 - x4") {
    auto F = oracle::sys({1}, {{1, 1, -1, -1}});
    // sum over d of (7 - |d|)^2 for the pair sums d in [-6, 6]
    std::uint64_t squares = 0;
    for (int d = -6; d <= 6; ++d) squares += std::uint64_t((7 - std::abs(d)) * (7 - std::abs(d)));
    CHECK(squares == 231);
    CHECK(count_zeros_mim(F, 3, Split{{0, 1}, {2, 3}}).count == squares);
    CHECK(oracle::count_box(F, 3) == squares);
    CHECK_THROWS_AS(count_zeros_mim(F, 3, Split{{}, {0, 1, 2, 3}}), Error);
    CHECK_THROWS_AS(count_zeros_mim(F, 3, Split{{0, 1}, {2}}), Error);
}

TEST_CASE("brute, mim and the oracle agree on random small systems") {
    BlockRng rng(11, 0);
    for (int t = 0; t < 20; ++t) {
        const int n = int(rng.integer(1, 2));
        const std::size_t s = std::size_t(rng.integer(2, 4));
        std::vector<int> k{int(rng.integer(1, 2))};
        if (n == 2) k.push_back(k[0] + int(rng.integer(1, 2)));
        std::vector<std::vector<std::int64_t>> u(std::size_t(n), std::vector<std::int64_t>(s, 0));
        for (auto& row : u)
            for (auto& v : row) {
                v = rng.integer(-3, 3);
                if (v == 0) v = 1;
            }
        auto F = oracle::sys(k, u);
        const std::int64_t X = rng.integer(0, 6);
        const auto want = oracle::count_box(F, X);
        CHECK(count_zeros_brute(F, X).count == want);
        CHECK(count_zeros_mim(F, X).count == want);
    }
}

TEST_CASE("tuple budget is enforced") {
    auto F = oracle::sys({1}, {{1, 1, 1, 1, -1, -1}});
    CHECK_THROWS_AS(count_zeros_brute(F, 10, Budget{1000, 1 << 20}), Error);
    try {
        count_zeros_brute(F, 10, Budget{1000, 1 << 20});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget);
    }
}

TEST_CASE("Vinogradov counts") {
    for (std::int64_t X : {1, 5, 17}) CHECK(vinogradov_count(1, 4, X) == X);
    CHECK(vinogradov_count(2, 1, 3) == 19);
    // b = 2, k = 2 by direct enumeration of (x1, x2, y1, y2) in [1, 4]
    std::uint64_t direct = 0;
    oracle::each_tuple(4, 1, 4, [&](const auto& x) {
        direct += (x[0] + x[1] == x[2] + x[3]) && (x[0] * x[0] + x[1] * x[1] == x[2] * x[2] + x[3] * x[3]);
    });
    CHECK(vinogradov_count(2, 2, 4) == direct);
    CHECK(moment_count({2, ExponentTuple::consecutive(2), Box::positive}, 4) == direct);
    CHECK(moment_count({2, ExponentTuple::consecutive(3), Box::positive}, 4) == vinogradov_count(2, 3, 4));
}

TEST_CASE("moment counts on the symmetric box") {
    for (std::int64_t X : {1, 4, 9}) CHECK(moment_count({1, ExponentTuple({1, 3, 5}), Box::symmetric}, X) == 2 * X + 1);
    std::uint64_t direct = 0;
    oracle::each_tuple(4, -3, 3, [&](const auto& x) {
        direct += (x[0] + x[1] == x[2] + x[3]) &&
                  (x[0] * x[0] * x[0] + x[1] * x[1] * x[1] == x[2] * x[2] * x[2] + x[3] * x[3] * x[3]);
    });
    CHECK(moment_count({2, ExponentTuple({1, 3}), Box::symmetric}, 3) == direct);
}

TEST_CASE("growth fits") {
    std::vector<std::int64_t> xs{50, 100, 200};
    auto f1 = exponent_fit({1, ExponentTuple({1}), Box::positive}, xs);
    CHECK(f1.slope == doctest::Approx(1.0).epsilon(0.01));
    xs = {20, 40, 80};
    auto f2 = exponent_fit({2, ExponentTuple({1}), Box::positive}, xs);
    CHECK(std::abs(f2.slope - 3.0) <= 0.05);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(f2.counts[i] == (2 * xs[i] * xs[i] * xs[i] + xs[i]) / 3);
    xs = {10, 20, 40};
    auto f3 = exponent_fit({3, ExponentTuple({1, 2}), Box::positive}, xs);
    for (double r : f3.ratios) CHECK(std::isfinite(r));
    CHECK(std::isfinite(f3.slope));
    CHECK_THROWS_AS(exponent_fit({1, ExponentTuple({1}), Box::positive}, std::vector<std::int64_t>{1, 2}), Error);
}

TEST_CASE("translation invariance") {
    CHECK(translation_invariance_check(2, 2, 4, 7));
    CHECK(translation_invariance_check(1, 3, 6, 100));
    CHECK(translation_invariance_check(2, 1, 3, -10));
}

TEST_CASE("counts do not depend on the thread count") {
    auto F = oracle::sys({1, 2}, {{1, 1, 1, -1, -1, -2}, {1, 2, -1, -1, 1, -2}});
    set_thread_count(1);
    const auto a = count_zeros_mim(F, 12).count;
    set_thread_count(4);
    const auto b = count_zeros_mim(F, 12).count;
    set_thread_count(0);
    CHECK(a == b);
}
