#ifndef QUADCHROMA_PARALLEL_HPP
#define QUADCHROMA_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quadchroma {

// 0 means "use the available hardware parallelism".
inline unsigned resolve_threads(unsigned requested)
{
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(chunk_index) for every chunk in [0, n_chunks) on up to `threads`
// workers and returns the per-chunk results in chunk order. Which worker runs
// which chunk is irrelevant to the output, so any reduction done by the
// caller in chunk order is independent of the thread count.
template <class Result, class ChunkFn>
std::vector<Result> run_chunks(std::size_t n_chunks, unsigned threads, ChunkFn&& fn)
{
    std::vector<Result> results(n_chunks);
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n_chunks, 1));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) results[c] = fn(c);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            try {
                results[c] = fn(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_chunks, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return results;
}

} // namespace quadchroma

#endif
