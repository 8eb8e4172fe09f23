#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace pairsel {

/// Runs fn(i) for i in [0, count) across up to `threads` workers. Work items
/// are claimed from a shared counter; callers must write results into
/// per-index slots so output is independent of scheduling.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int workers = std::min(threads, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace pairsel
