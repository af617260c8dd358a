#pragma once

#include <cstddef>
#include <functional>

namespace riesz {

// Worker cap: RIESZ_STAR_THREADS if set (>=1), otherwise hardware concurrency.
std::size_t thread_cap();

// Runs fn(i) for i in [begin, end) on up to thread_cap() workers.
// Each index is processed by exactly one worker and must write only its own
// outputs; reductions are done by the caller in a fixed sequential order so
// results are byte-identical regardless of the worker count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

} // namespace riesz
