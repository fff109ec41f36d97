#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ionchain {

/** Run fn(i) for i in [0, count) on up to n_threads workers. Tasks write
    results into caller-owned slots indexed by i, so the output is identical
    for any thread count; only wall time changes. The first exception thrown
    by a task is rethrown after all workers join.
*/
inline void parallel_for(std::size_t count, int n_threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0)
        return;
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(n_threads > 0 ? n_threads : 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace ionchain
