#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hyperlab {

/// Split [0, n) into `shards` contiguous ranges and run fn(shard, begin, end)
/// on worker threads. Callers write into index-addressed slots, so the merged
/// result never depends on the shard count.
template <class Fn>
void for_shards(std::size_t n, int shards, Fn&& fn) {
    shards = std::max(1, shards);
    if (shards == 1 || n < 2) {
        fn(0, std::size_t{0}, n);
        return;
    }
    const auto count = static_cast<std::size_t>(shards);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(count);
    workers.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t lo = n * s / count, hi = n * (s + 1) / count;
        workers.emplace_back([&, s, lo, hi] {
            try {
                fn(static_cast<int>(s), lo, hi);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hyperlab
