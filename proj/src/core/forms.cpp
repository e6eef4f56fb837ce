#include "core/forms.hpp"

#include "core/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace diagarcs {

namespace {
constexpr int kMaxExponent = 64;
constexpr std::int64_t kMaxCoeff = std::int64_t(1) << 62;
}  // namespace

ExponentTuple::ExponentTuple(std::vector<int> k) : k_(std::move(k)) {
    if (k_.empty()) fail(ErrorKind::input, "exponent tuple must be nonempty");
    for (std::size_t i = 0; i < k_.size(); ++i) {
        if (k_[i] < 1) fail(ErrorKind::input, "exponent k_" + std::to_string(i + 1) + " must be >= 1");
        if (k_[i] > kMaxExponent) fail(ErrorKind::input, "exponent k_" + std::to_string(i + 1) + " exceeds 64");
        if (i > 0 && k_[i] <= k_[i - 1]) fail(ErrorKind::input, "exponents not strictly increasing");
    }
}

ExponentTuple ExponentTuple::consecutive(int k_max) {
    if (k_max < 1) fail(ErrorKind::input, "k_max must be >= 1");
    std::vector<int> k(k_max);
    std::iota(k.begin(), k.end(), 1);
    return ExponentTuple(std::move(k));
}

int ExponentTuple::sigma() const { return std::accumulate(k_.begin(), k_.end(), 0); }

std::vector<std::int64_t> DiagonalSystem::column(std::size_t j) const {
    std::vector<std::int64_t> c(n());
    for (std::size_t i = 0; i < n(); ++i) c[i] = coeff(i, j);
    return c;
}

std::int64_t DiagonalSystem::sup_norm() const {
    std::int64_t m = 0;
    for (auto v : u_) m = std::max(m, std::abs(v));
    return m;
}

std::int64_t DiagonalSystem::row_abs_sum(std::size_t i) const {
    std::int64_t t = 0;
    for (std::size_t j = 0; j < s_; ++j) t += std::abs(coeff(i, j));
    return t;
}

DiagonalSystem validate_system(const RawSystem& raw) {
    ExponentTuple k(raw.k);
    const std::size_t n = k.size();
    if (raw.u.size() != n)
        fail(ErrorKind::input, "dimension mismatch: u has " + std::to_string(raw.u.size()) + " rows, expected " +
                                   std::to_string(n));
    const std::size_t s = raw.u[0].size();
    if (s == 0) fail(ErrorKind::input, "dimension mismatch: row 1 is empty");
    std::vector<std::int64_t> flat;
    flat.reserve(n * s);
    for (std::size_t i = 0; i < n; ++i) {
        if (raw.u[i].size() != s)
            fail(ErrorKind::input, "dimension mismatch: row " + std::to_string(i + 1) + " has " +
                                       std::to_string(raw.u[i].size()) + " entries, expected " + std::to_string(s));
        for (std::size_t j = 0; j < s; ++j) {
            std::int64_t v = raw.u[i][j];
            if (v == 0)
                fail(ErrorKind::input, "zero coefficient at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            if (v >= kMaxCoeff || v <= -kMaxCoeff)
                fail(ErrorKind::input,
                     "coefficient at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") exceeds 2^62");
            flat.push_back(v);
        }
    }
    return DiagonalSystem(raw.name, std::move(k), s, std::move(flat));
}

DiagonalSystem parse_system_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::input, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(ErrorKind::input, "schema: top level must be an object");
    RawSystem raw;
    try {
        if (doc.contains("name")) raw.name = doc.at("name").get<std::string>();
        if (!doc.contains("k")) fail(ErrorKind::input, "schema: missing field 'k'");
        if (!doc.contains("u")) fail(ErrorKind::input, "schema: missing field 'u'");
        raw.k = doc.at("k").get<std::vector<int>>();
        raw.u = doc.at("u").get<std::vector<std::vector<std::int64_t>>>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::input, std::string("schema: ") + e.what());
    }
    return validate_system(raw);
}

DiagonalSystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "cannot open system file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_system_json(buf.str());
}

std::string system_to_json(const DiagonalSystem& F) {
    nlohmann::json doc;
    doc["name"] = F.name();
    doc["k"] = F.k().values();
    std::vector<std::vector<std::int64_t>> rows(F.n());
    for (std::size_t i = 0; i < F.n(); ++i)
        for (std::size_t j = 0; j < F.s(); ++j) rows[i].push_back(F.coeff(i, j));
    doc["u"] = rows;
    return doc.dump();
}

std::vector<i128> evaluate_forms(const DiagonalSystem& F, std::span<const std::int64_t> x) {
    if (x.size() != F.s())
        fail(ErrorKind::input, "point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(F.s()));
    std::vector<i128> out(F.n(), 0);
    for (std::size_t i = 0; i < F.n(); ++i)
        for (std::size_t j = 0; j < F.s(); ++j)
            out[i] = add_checked(out[i], mul_checked(F.coeff(i, j), pow_checked(x[j], F.k()[i])));
    return out;
}

TheoremConstants constants(const DiagonalSystem& F) {
    const auto& k = F.k();
    const std::int64_t kn = k.top();
    return TheoremConstants{k.sigma(), Fraction{1, std::int64_t(F.n()) * kn * kn}, int(1 + kn * (1 + kn)),
                            int((std::int64_t(F.n()) + 1) * kn + 1)};
}

std::vector<std::int64_t> coefficient_column(const DiagonalSystem& F, std::size_t j) {
    if (j < 1 || j > F.s())
        fail(ErrorKind::input, "column index " + std::to_string(j) + " outside 1.." + std::to_string(F.s()));
    return F.column(j - 1);
}

std::int64_t sup_norm(const DiagonalSystem& F) { return F.sup_norm(); }

}  // namespace diagarcs
