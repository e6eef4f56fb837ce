#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace diagarcs {

using i128 = __int128;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

// Checked 128-bit arithmetic. Every overflow throws an overflow Error.
i128 add_checked(i128 a, i128 b);
i128 mul_checked(i128 a, i128 b);
i128 pow_checked(i128 base, int exponent);

std::string to_string(i128 v);
BigInt to_big(i128 v);
BigInt to_big(u128 v);

// Saturating product used for budget arithmetic on tuple counts.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_pow(std::uint64_t base, std::size_t exponent);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);

}  // namespace diagarcs
