#include "diagarcs/diagarcs.h"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    diag_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("systems through the C API") {
    diag_system* F = nullptr;
    REQUIRE(diag_system_parse(R"({"name":"sq","k":[2],"u":[[1,-1]]})", &F) == DIAG_OK);
    CHECK(diag_system_n(F) == 1);
    CHECK(diag_system_s(F) == 2);
    char* count = nullptr;
    REQUIRE(diag_count(F, 2, 0, nullptr, &count) == DIAG_OK);
    CHECK(take(count) == "9");
    REQUIRE(diag_count(F, 25, 2, nullptr, &count) == DIAG_OK);
    CHECK(take(count) == "101");
    CHECK(diag_count(F, 2, 7, nullptr, &count) == DIAG_ERR_INPUT);
    double t = 1;
    REQUIRE(diag_T_q(F, 2, &t) == DIAG_OK);
    CHECK(std::abs(t) < 1e-12);
    char* js = nullptr;
    REQUIRE(diag_system_json(F, &js) == DIAG_OK);
    const auto j = nlohmann::json::parse(take(js));
    CHECK(j["k"] == nlohmann::json::array({2}));

    diag_budget tiny{10, 1 << 20};
    diag_system* G = nullptr;
    REQUIRE(diag_system_parse(R"({"k":[1],"u":[[1,1,1,-1,-1]]})", &G) == DIAG_OK);
    CHECK(diag_count(G, 5, 1, &tiny, &count) == DIAG_ERR_BUDGET);
    CHECK(std::string(diag_last_error()).size() > 0);
    diag_system_free(G);
    diag_system_free(F);
}

TEST_CASE("errors carry codes and messages") {
    diag_system* F = nullptr;
    CHECK(diag_system_parse("{not json", &F) == DIAG_ERR_INPUT);
    CHECK(std::string(diag_last_error()).find("malformed JSON") == 0);
    CHECK(diag_system_parse(R"({"k":[2,1],"u":[[1],[1]]})", &F) == DIAG_ERR_INPUT);
    CHECK(diag_system_load("/nonexistent/system.json", &F) == DIAG_ERR_INPUT);
    CHECK(diag_system_parse(nullptr, &F) == DIAG_ERR_INPUT);
    CHECK(std::string(diag_status_name(DIAG_ERR_BUDGET)) == "budget");
    diag_report* r = nullptr;
    CHECK(diag_run("nonsense", "{}", &r) == DIAG_ERR_INPUT);
    CHECK(diag_run("weyl", R"({"mode":"eval","bogus":1})", &r) == DIAG_ERR_INPUT);
}

TEST_CASE("budget from the environment") {
    ::setenv("DIAG_ARCS_BUDGET_TUPLES", "12345", 1);
    diag_budget b{};
    REQUIRE(diag_budget_from_env(&b) == DIAG_OK);
    CHECK(b.max_tuples == 12345);
    ::setenv("DIAG_ARCS_BUDGET_TUPLES", "-3", 1);
    CHECK(diag_budget_from_env(&b) == DIAG_ERR_INPUT);
    ::unsetenv("DIAG_ARCS_BUDGET_TUPLES");
    REQUIRE(diag_budget_from_env(&b) == DIAG_OK);
    CHECK(b.max_tuples == 1000000000ULL);
}

TEST_CASE("point evaluations") {
    const int k1[] = {1};
    const double half[] = {0.5};
    double re = 0, im = 0;
    REQUIRE(diag_weyl_sum(k1, 1, half, 2, &re, &im) == DIAG_OK);
    CHECK(re == doctest::Approx(1.0));
    CHECK(std::abs(im) < 1e-12);

    const int k135[] = {1, 3, 5};
    const double alpha[] = {3.0 / 7, 1.0, 5.0 / 7};
    int major = -1;
    int64_t q = 0, a[3] = {};
    REQUIRE(diag_classify(k135, 3, alpha, 256, 5, 8, &major, &q, a) == DIAG_OK);
    CHECK(major == 1);
    CHECK(q == 7);
    CHECK(a[0] == 3);
    CHECK(diag_classify(k135, 3, alpha, 256, 1, 100, &major, &q, a) == DIAG_ERR_INPUT);
}

TEST_CASE("reports render as CSV and JSON") {
    diag_report* r = nullptr;
    REQUIRE(diag_run("vmvt", R"({"b":[1],"k":[3],"X":[4,5,6],"timing":false})", &r) == DIAG_OK);
    CHECK(diag_report_warning_count(r) == 0);
    CHECK(diag_report_warning(r, 0) == nullptr);
    char* text = nullptr;
    REQUIRE(diag_report_render(r, DIAG_FORMAT_CSV, &text) == DIAG_OK);
    const std::string csv = take(text);
    CHECK(csv.find("# command: vmvt\n") != std::string::npos);
    CHECK(csv.find("b,k_max,X,J,") != std::string::npos);
    CHECK(csv.find("\n1,3,5,5,") != std::string::npos);
    REQUIRE(diag_report_render(r, DIAG_FORMAT_JSON, &text) == DIAG_OK);
    const auto j = nlohmann::json::parse(take(text));
    CHECK(j["meta"]["command"] == "vmvt");
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][2][3] == 6);
    CHECK(diag_report_render(r, diag_format(9), &text) == DIAG_ERR_INPUT);
    diag_report_free(r);
}
