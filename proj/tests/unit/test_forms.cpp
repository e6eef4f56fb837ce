#include "core/errors.hpp"
#include "core/forms.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace diagarcs;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("validate_system accepts a valid system and rejects bad exponents and zeros") {
    auto F = oracle::sys({1, 2}, {{1, 1}, {1, -1}});
    CHECK(F.n() == 2);
    CHECK(F.s() == 2);
    CHECK(error_of([] { oracle::sys({2, 2}, {{1, 1}, {1, 1}}); }).find("exponents not strictly increasing") !=
          std::string::npos);
    CHECK(error_of([] { oracle::sys({1, 3}, {{1, 1}, {0, 1}}); }) == "zero coefficient at (2,1)");
    CHECK_THROWS_AS(oracle::sys({1, 2}, {{1, 1}}), Error);
    CHECK_THROWS_AS(oracle::sys({0}, {{1, 1}}), Error);
}

TEST_CASE("evaluate_forms") {
    auto sq = oracle::sys({2}, {{1, -1}});
    std::vector<std::int64_t> x{3, 3};
    CHECK(evaluate_forms(sq, x) == std::vector<i128>{0});
    x = {5, 4};
    CHECK(evaluate_forms(sq, x) == std::vector<i128>{9});
    auto G = oracle::sys({1, 3}, {{1, 1}, {1, -1}});
    x = {2, -2};
    CHECK(evaluate_forms(G, x) == std::vector<i128>{0, 16});
}

TEST_CASE("constants") {
    auto c = constants(oracle::sys({1, 3, 5}, {{1, 1}, {1, 1}, {1, 1}}));
    CHECK(c.sigma == 9);
    CHECK(c.eta0 == Fraction{1, 75});
    CHECK(c.s_min_thm1 == 31);
    CHECK(c.s_min_major == 21);
    auto c7 = constants(oracle::sys({7}, {{1, 1}}));
    CHECK(c7.sigma == 7);
    CHECK(c7.eta0 == Fraction{1, 49});
    for (int n = 1; n <= 6; ++n) CHECK(ExponentTuple::consecutive(n).sigma() == n * (n + 1) / 2);
}

TEST_CASE("coefficient columns and sup norm") {
    auto F = oracle::sys({1, 2}, {{1, 1}, {1, -1}});
    CHECK(coefficient_column(F, 2) == std::vector<std::int64_t>{1, -1});
    CHECK_THROWS_AS(coefficient_column(F, 3), Error);
    CHECK(sup_norm(oracle::sys({1, 2}, {{3, -7}, {2, 5}})) == 7);
}

TEST_CASE("JSON round trip and malformed input") {
    auto F = parse_system_json(R"({"name": "toy", "k": [1, 2], "u": [[1, 2, -3], [4, -5, 6]]})");
    auto G = parse_system_json(system_to_json(F));
    CHECK(G.name() == "toy");
    CHECK(G.k() == F.k());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(G.coeff(i, j) == F.coeff(i, j));
    CHECK(error_of([] { parse_system_json("{\"k\": [1], "); }).rfind("malformed JSON", 0) == 0);
    CHECK(error_of([] { parse_system_json(R"({"k": [1]})"); }) == "schema: missing field 'u'");
    CHECK_THROWS_AS(load_system("/nonexistent/system.json"), Error);
}
