#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace precis {

// Runs fn(i) for i in [first, last) on up to `threads` workers pulling from a
// shared counter. Tasks must write only to their own output slots; with that
// discipline the results are identical to a sequential loop. The first
// exception thrown by any task is rethrown on the calling thread.
inline void parallel_for_index(std::size_t first, std::size_t last, std::size_t threads,
                               const std::function<void(std::size_t)>& fn) {
    if (last <= first) return;
    const std::size_t count = last - first;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = first; i < last; ++i) fn(i);
        return;
    }
    threads = std::min(threads, count);
    std::atomic<std::size_t> next{first};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic<int> error_claimed{0}; // first failure wins; others are dropped

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= last) return;
            try {
                fn(i);
            } catch (...) {
                int expected = 0;
                if (error_claimed.compare_exchange_strong(expected, 1))
                    error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace precis
