#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ncbesq::parallel {

// NCBESQ_JOBS if set to a positive integer, else the hardware concurrency.
std::size_t default_jobs();

// Runs f(i) for i in [0, n) on up to `jobs` threads (0 means default_jobs()).
// Results must be written by index so that the outcome does not depend on scheduling.
// If several calls throw, the exception of the smallest index is rethrown.
template <class F>
void for_each_index(std::size_t n, std::size_t jobs, F&& f) {
    if (jobs == 0) jobs = default_jobs();
    if (jobs > n) jobs = n;
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    std::size_t err_index = n;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

template <class R, class F>
std::vector<R> map_trials(std::size_t n, std::size_t jobs, F&& f) {
    std::vector<R> out(n);
    for_each_index(n, jobs, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

}  // namespace ncbesq::parallel
