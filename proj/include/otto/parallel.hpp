// parallel.hpp: fixed-partition worker pool for independent sweep points.
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace otto {

// Process-wide default used when a caller passes threads <= 0.
void set_default_threads(int n) noexcept;
int default_threads() noexcept;

// Calls f(i) for i in [0, n). Index ranges are split into contiguous blocks,
// so results written by index do not depend on the number of workers. The
// first exception thrown by any worker is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace otto
