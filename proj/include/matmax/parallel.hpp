#pragma once

#include <cstdint>

namespace matmax {

/// Number of workers used by parallel_for. Reads MATMAX_THREADS once; an
/// unset or unparsable value falls back to the hardware concurrency.
int worker_count();

namespace detail {
void parallel_run(std::int64_t n, void* ctx, void (*body)(void*, std::int64_t, std::int64_t));
}

/// Runs fn(i) for i in [0, n). Iterations must write disjoint state; the
/// split into chunks is deterministic but the interleaving is not, so
/// callers must not reduce across iterations inside fn.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn)
{
    auto body = [](void* ctx, std::int64_t lo, std::int64_t hi) {
        auto& f = *static_cast<Fn*>(ctx);
        for (std::int64_t i = lo; i < hi; ++i)
            f(i);
    };
    detail::parallel_run(n, &fn, body);
}

} // namespace matmax
