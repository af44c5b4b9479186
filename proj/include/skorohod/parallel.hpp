#pragma once

#include <cstddef>
#include <functional>

namespace skorohod {

// Runs body(begin, end) over contiguous chunks of [0, count) on up to `workers`
// threads. Callers write per-index results, so output never depends on scheduling.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace skorohod
