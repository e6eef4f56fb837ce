#pragma once

#include <cstdint>

namespace diagarcs {

struct Budget {
    std::uint64_t max_tuples = 1'000'000'000ULL;
    std::uint64_t max_bytes = 8ULL << 30;
};

}  // namespace diagarcs
