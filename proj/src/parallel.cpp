#include "riesz_star/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace riesz {

std::size_t thread_cap() {
    if (const char* env = std::getenv("RIESZ_STAR_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (...) {
            // fall through to hardware default on unparsable values
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn) {
    if (end <= begin) return;
    const std::size_t n = end - begin;
    std::size_t workers = thread_cap();
    if (workers > n) workers = n;
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    // Dynamic index handout; safe because outputs are per-index.
    std::atomic<std::size_t> next{begin};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= end) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace riesz
