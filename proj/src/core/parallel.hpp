#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace diagarcs {

void set_thread_count(unsigned n);  // 0 restores the hardware default
unsigned thread_count();

// Runs fn(i) for every i in [0, count). Callers store results by index and
// reduce them in index order, so the outcome never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    std::size_t workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
        run();
    }
    if (error) std::rethrow_exception(error);
}

// Deterministic per-block random stream: block b of seed s always yields the
// same sequence regardless of which worker draws it.
// Distributions are converted by hand because the standard leaves the
// library distributions implementation-defined.
class BlockRng {
public:
    BlockRng(std::uint64_t seed, std::uint64_t block);
    std::uint64_t next() { return engine_(); }
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi);            // inclusive

private:
    std::mt19937_64 engine_;
};

}  // namespace diagarcs
