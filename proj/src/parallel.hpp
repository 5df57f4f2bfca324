#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace persuade::detail {

// Runs fn(i) for i in [begin, end) using strided assignment across threads.
// Each index is processed exactly once, so results written per index do not
// depend on scheduling.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
    const std::size_t count = end > begin ? end - begin : 0;
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count < 64) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = begin + t; i < end; i += workers) fn(i);
        });
}

}  // namespace persuade::detail
