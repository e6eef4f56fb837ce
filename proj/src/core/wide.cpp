#include "core/wide.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace diagarcs {

i128 add_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::overflow, "128-bit overflow in addition");
    return r;
}

i128 mul_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::overflow, "128-bit overflow in multiplication");
    return r;
}

i128 pow_checked(i128 base, int exponent) {
    i128 r = 1;
    for (int e = 0; e < exponent; ++e) r = mul_checked(r, base);
    return r;
}

std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 m = neg ? u128(0) - u128(v) : u128(v);
    std::string out;
    while (m != 0) {
        out.push_back(char('0' + int(m % 10)));
        m /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

BigInt to_big(u128 v) {
    BigInt r = BigInt(std::uint64_t(v >> 64));
    r <<= 64;
    r += BigInt(std::uint64_t(v));
    return r;
}

BigInt to_big(i128 v) {
    if (v >= 0) return to_big(u128(v));
    return -to_big(u128(0) - u128(v));
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exponent) {
    std::uint64_t r = 1;
    for (std::size_t e = 0; e < exponent; ++e) r = sat_mul(r, base);
    return r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return std::int64_t((i128(a) * i128(b)) % m);
}

}  // namespace diagarcs
