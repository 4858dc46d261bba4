#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace sortition {

inline int default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// Runs fn(i) for i in [0, count) over a fixed block partition. Work items must
// be independent and write only to their own slots; validate inputs before
// entering (a throwing worker terminates). Results cannot depend on the thread
// count.
template <typename Fn>
void parallel_for(long long count, int threads, Fn&& fn) {
    threads = int(std::max<long long>(1, std::min<long long>(threads, count)));
    if (threads == 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const long long begin = count * t / threads;
        const long long end = count * (t + 1) / threads;
        pool.emplace_back([&fn, begin, end] {
            for (long long i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace sortition
