#pragma once

#include <cstddef>
#include <functional>

namespace phaserec {

/// Worker count: PHASEREC_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n) split into contiguous blocks across threads.
/// body must only write state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace phaserec
