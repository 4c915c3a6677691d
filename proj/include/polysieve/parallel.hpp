#ifndef POLYSIEVE_PARALLEL_HPP
#define POLYSIEVE_PARALLEL_HPP

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace polysieve {

// Resolve the worker count: explicit request > POLYSIEVE_WORKERS > min(8, hw).
// Results never depend on this value; only scheduling does.
int worker_count(int requested = 0);

// Run fn(worker_id, begin, end) over a fixed partition of [0, n) into
// `workers` contiguous blocks. The partition depends only on (n, workers),
// so per-block results are reproducible; callers merge blocks in index
// order to keep reductions deterministic.
void run_partitioned(std::int64_t n, int workers,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn);

}  // namespace polysieve

#endif
