#include "core/parallel.hpp"

namespace diagarcs {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

BlockRng::BlockRng(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(block),
                      std::uint32_t(block >> 32), 0x5eedu};
    engine_.seed(seq);
}

std::int64_t BlockRng::integer(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = std::uint64_t(hi - lo) + 1;
    if (span == 0) return std::int64_t(engine_());
    // rejection keeps the draw unbiased
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + std::int64_t(x % span);
}

}  // namespace diagarcs
