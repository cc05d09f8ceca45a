#pragma once

#include <cstdint>
#include <functional>

namespace circlefeat {

/// Worker count actually used: `requested` if positive, otherwise the
/// hardware count, both capped by the CIRCLE_FEAT_THREADS environment
/// variable when it is set to a positive integer.
int effective_thread_count(int requested = 0);

/// Runs fn(i) for every i in [0, n). Callers must write results into
/// index-addressed slots; the schedule is unspecified but the smallest-index
/// exception is the one rethrown, so failures are deterministic too.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                  int threads = 0);

}  // namespace circlefeat
