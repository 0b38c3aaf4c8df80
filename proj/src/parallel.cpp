#include "matmax/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace matmax {

int worker_count()
{
    static const int n = [] {
        if (const char* env = std::getenv("MATMAX_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1 && v <= 256)
                return static_cast<int>(v);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
    }();
    return n;
}

namespace detail {

void parallel_run(std::int64_t n, void* ctx, void (*body)(void*, std::int64_t, std::int64_t))
{
    if (n <= 0)
        return;
    const int workers = std::min<std::int64_t>(worker_count(), n);
    if (workers <= 1 || n < 64) {
        body(ctx, 0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        threads.emplace_back([&, lo, hi] {
            try {
                body(ctx, lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace detail
} // namespace matmax
