#pragma once

#include <cstddef>
#include <functional>

namespace fraclap {

/// Worker count: FRACLAP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. Jobs are
/// claimed in index order; callers write results into slot i so the outcome
/// does not depend on scheduling. The first exception thrown by a job is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace fraclap
