#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace landau
{

inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end, worker) over `count` items split into contiguous, equally sized
/// chunks, one per worker. Each worker walks its chunk in order. If several workers throw,
/// the exception of the lowest worker is rethrown, so the reported failure is the one with
/// the lowest item index regardless of scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body)
{
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
    if (threads == 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = count * w / threads;
            const std::size_t end = count * (w + 1) / threads;
            pool.emplace_back([&, begin, end, w] {
                try {
                    body(begin, end, w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace landau
