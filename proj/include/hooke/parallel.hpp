#pragma once

#include <cstddef>
#include <functional>

namespace hooke {

/// Worker count: hardware concurrency capped by HOOKE_PEO_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index writes only its own output
/// slot, so results do not depend on the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hooke
