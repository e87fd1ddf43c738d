#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace roughheat::util {

inline int max_threads() {
    if (const char* env = std::getenv("ROUGHHEAT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Deterministic parallel loop: the work for index i must not depend on the
/// execution order (results land in per-index slots).
inline void parallel_for(int n, const std::function<void(int)>& body) {
    const int nt = std::min(max_threads(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += nt) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace roughheat::util
