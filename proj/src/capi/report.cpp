#include "capi/report.hpp"

#include "core/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace diagarcs {

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) fail(ErrorKind::numeric, "report row width differs from the header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c) {
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const BigInt& v) const { return v.str(); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& v) const { return csv_field(v); }
    };
    return std::visit(V{}, c);
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_cell(const Cell& c) {
    struct V {
        std::string operator()(std::monostate) const { return "null"; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const BigInt& v) const { return v.str(); }
        std::string operator()(double v) const { return std::isfinite(v) ? format_double(v) : "null"; }
        std::string operator()(const std::string& v) const { return json_string(v); }
    };
    return std::visit(V{}, c);
}

}  // namespace

std::string to_csv(const Report& r) {
    std::ostringstream out;
    for (const auto& [k, v] : r.meta) out << "# " << k << ": " << v << "\n";
    for (const auto& w : r.warnings) out << "# warning: " << w << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << csv_field(r.columns[i]);
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << "\n";
    }
    return out.str();
}

// Written by hand so that big integers and 17-digit floats keep their exact text.
std::string to_json(const Report& r) {
    std::ostringstream out;
    out << "{\n  \"meta\": {";
    for (std::size_t i = 0; i < r.meta.size(); ++i)
        out << (i ? ", " : "") << json_string(r.meta[i].first) << ": " << json_string(r.meta[i].second);
    out << "},\n  \"warnings\": [";
    for (std::size_t i = 0; i < r.warnings.size(); ++i) out << (i ? ", " : "") << json_string(r.warnings[i]);
    out << "],\n  \"columns\": [";
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? ", " : "") << json_string(r.columns[i]);
    out << "],\n  \"rows\": [";
    for (std::size_t j = 0; j < r.rows.size(); ++j) {
        out << (j ? ",\n    [" : "\n    [");
        for (std::size_t i = 0; i < r.rows[j].size(); ++i) out << (i ? ", " : "") << json_cell(r.rows[j][i]);
        out << "]";
    }
    out << (r.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return out.str();
}

}  // namespace diagarcs
