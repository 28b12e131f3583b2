#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace frontlab {

/// Worker count for sweeps: FRONTLAB_THREADS when set and positive,
/// otherwise the hardware concurrency.
inline unsigned sweep_threads() {
    if (const char* env = std::getenv("FRONTLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls job(i) for i in [0, count) on up to sweep_threads() workers. Each
/// job writes only its own output slot, so results do not depend on the
/// schedule. The first exception is rethrown after all workers finish.
template <class Job>
void parallel_for(std::size_t count, Job&& job) {
    const std::size_t workers = std::min<std::size_t>(sweep_threads(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace frontlab
