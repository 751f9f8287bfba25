#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace skewddvv {

// Worker count: SKEWDDVV_THREADS when set (minimum 1), otherwise the
// hardware concurrency. Results never depend on the count.
inline int resolve_threads() {
    if (const char* env = std::getenv("SKEWDDVV_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, total) across workers on strided index sets.
// fn must write only to slot i of preallocated storage. The first exception
// (lowest worker index) is rethrown after all workers join.
template <typename Fn>
inline void parallel_for_index(long total, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (total < threads) threads = static_cast<int>(std::max<long>(1, total));
    if (threads == 1) {
        for (long i = 0; i < total; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (long i = t; i < total; i += threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace skewddvv
