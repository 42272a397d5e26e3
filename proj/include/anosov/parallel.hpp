#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anosov {

// Static-partition parallel loop over [0, count). Workers write to disjoint
// preallocated slots; any reduction happens sequentially afterwards so results
// do not depend on the thread count. The first worker exception is rethrown
// on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t lo = count * w / nw;
        const std::size_t hi = count * (w + 1) / nw;
        pool.emplace_back([lo, hi, &body, &error, &error_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline int default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace anosov
