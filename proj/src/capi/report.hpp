#pragma once

#include "core/wide.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace diagarcs {

// Empty cell, exact integer, big integer, float, text.
using Cell = std::variant<std::monostate, std::int64_t, BigInt, double, std::string>;

struct Report {
    std::vector<std::pair<std::string, std::string>> meta;  // reproducibility header, in order
    std::vector<std::string> warnings;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void note(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }
    void add_row(std::vector<Cell> row);
};

std::string format_double(double v);  // 17 significant digits, locale free
std::string to_csv(const Report& r);
std::string to_json(const Report& r);

}  // namespace diagarcs
