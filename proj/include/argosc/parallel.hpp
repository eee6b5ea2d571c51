#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace argosc {

// Worker count: ARGOSC_WORKERS env var overrides hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("ARGOSC_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Each index is processed exactly once; tasks
// must write only to their own output slot so results are independent of
// scheduling order.
inline void parallel_for(long count, const std::function<void(long)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        try {
            for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(count); // stop handing out work
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<long>(workers, count)) - 1;
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace argosc
