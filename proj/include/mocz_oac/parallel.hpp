#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mocz {

/// Runs fn(i) for i in [0, n) on up to `threads` workers pulling indices from
/// a shared counter. Callers keep results per index, so the outcome does not
/// depend on scheduling.
template <class Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn)
{
    if (n <= 0)
        return;
    const int workers = static_cast<int>(std::clamp<std::int64_t>(threads < 1 ? 1 : threads, 1, n));
    if (workers == 1) {
        for (std::int64_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        try {
            for (std::int64_t i = next++; i < n; i = next++)
                fn(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next = n;
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(body);
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace mocz
