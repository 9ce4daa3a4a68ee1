#pragma once

#include <cstddef>
#include <functional>

namespace cdp {

/// Runs fn(i) for i in [0, count). With threads > 1 the index range is
/// chunked across worker threads; fn must only touch per-index state, so
/// results do not depend on the partitioning.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace cdp
