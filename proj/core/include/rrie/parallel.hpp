#pragma once

#include <cstddef>
#include <functional>

namespace rrie {

/// Worker count: RRIE_THREADS when set to a positive integer, otherwise the
/// hardware concurrency; `requested` > 0 overrides both but is still capped
/// by RRIE_THREADS.
unsigned worker_count(unsigned requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions
/// escaping body are rethrown (first one wins) after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace rrie
