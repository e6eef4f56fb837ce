#pragma once

#include "core/wide.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diagarcs {

// Strictly increasing positive exponents k_1 < ... < k_n.
class ExponentTuple {
public:
    explicit ExponentTuple(std::vector<int> k);
    static ExponentTuple consecutive(int k_max);  // (1, 2, ..., k_max)

    std::size_t size() const { return k_.size(); }
    int operator[](std::size_t i) const { return k_[i]; }
    int top() const { return k_.back(); }
    int sigma() const;
    const std::vector<int>& values() const { return k_; }
    bool operator==(const ExponentTuple&) const = default;

private:
    std::vector<int> k_;
};

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return double(num) / double(den); }
    bool operator==(const Fraction&) const = default;
};

struct TheoremConstants {
    int sigma;
    Fraction eta0;    // 1/(n k_n^2)
    int s_min_thm1;   // 1 + k_n(1 + k_n)
    int s_min_major;  // (n+1) k_n + 1
    bool operator==(const TheoremConstants&) const = default;
};

struct RawSystem {
    std::string name;
    std::vector<int> k;
    std::vector<std::vector<std::int64_t>> u;  // n rows of s entries
};

// F_i(x) = sum_j u_{i,j} x_j^{k_i}; immutable once validated.
class DiagonalSystem {
public:
    const std::string& name() const { return name_; }
    const ExponentTuple& k() const { return k_; }
    std::size_t n() const { return k_.size(); }
    std::size_t s() const { return s_; }
    std::int64_t coeff(std::size_t i, std::size_t j) const { return u_[i * s_ + j]; }  // 0-based
    std::vector<std::int64_t> column(std::size_t j) const;                              // 0-based
    std::int64_t sup_norm() const;
    std::int64_t row_abs_sum(std::size_t i) const;

private:
    friend DiagonalSystem validate_system(const RawSystem& raw);
    DiagonalSystem(std::string name, ExponentTuple k, std::size_t s, std::vector<std::int64_t> u)
        : name_(std::move(name)), k_(std::move(k)), s_(s), u_(std::move(u)) {}

    std::string name_;
    ExponentTuple k_;
    std::size_t s_;
    std::vector<std::int64_t> u_;
};

DiagonalSystem validate_system(const RawSystem& raw);
DiagonalSystem parse_system_json(std::string_view text);
DiagonalSystem load_system(const std::filesystem::path& path);
std::string system_to_json(const DiagonalSystem& F);

std::vector<i128> evaluate_forms(const DiagonalSystem& F, std::span<const std::int64_t> x);
TheoremConstants constants(const DiagonalSystem& F);

// j counts from 1, matching the usual u_j notation.
std::vector<std::int64_t> coefficient_column(const DiagonalSystem& F, std::size_t j);
std::int64_t sup_norm(const DiagonalSystem& F);

}  // namespace diagarcs
