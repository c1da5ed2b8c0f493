#pragma once

#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace signspan {

// Static contiguous partition of [0, total) into `workers` blocks.  Partial
// results are combined in block order with +=, so the outcome is identical
// for any worker count.
template <typename Acc, typename Fn>
Acc parallel_block_reduce(std::uint64_t total, unsigned workers, Acc init, Fn&& fn) {
    if (workers == 0) workers = 1;
    if (workers == 1 || total < 2) {
        Acc acc = std::move(init);
        acc += fn(std::uint64_t{0}, total);
        return acc;
    }
    if (workers > total) workers = static_cast<unsigned>(total);
    std::vector<Acc> partial(workers, init);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned b = 0; b < workers; ++b) {
        const std::uint64_t lo = total / workers * b + std::min<std::uint64_t>(b, total % workers);
        const std::uint64_t hi = total / workers * (b + 1) + std::min<std::uint64_t>(b + 1, total % workers);
        pool.emplace_back([&partial, &fn, b, lo, hi] { partial[b] += fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
    Acc acc = std::move(init);
    for (unsigned b = 0; b < workers; ++b) acc += partial[b];
    return acc;
}

}  // namespace signspan
