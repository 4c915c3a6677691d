#include "polysieve/parallel.hpp"

#include <algorithm>
#include <cstdlib>

namespace polysieve {

int worker_count(int requested) {
    if (requested > 0) return std::min(requested, 64);
    if (const char* env = std::getenv("POLYSIEVE_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return std::min(v, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(std::min(hw, 8u));
}

void run_partitioned(std::int64_t n, int workers,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    workers = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(workers, n)));
    if (workers == 1) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::int64_t chunk = n / workers, extra = n % workers, begin = 0;
    for (int w = 0; w < workers; ++w) {
        std::int64_t len = chunk + (w < extra ? 1 : 0);
        std::int64_t end = begin + len;
        pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace polysieve
