#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hexlat {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Callers store
// results into index-addressed slots, so scheduling never changes output.
template <class Fn>
void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += n) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace hexlat
