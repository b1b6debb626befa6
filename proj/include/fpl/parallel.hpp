#pragma once

#include <cstddef>
#include <functional>

namespace fpl {

/// Number of workers used by parallel_for: FPL_THREADS when set to a positive
/// integer, otherwise std::thread::hardware_concurrency().
unsigned worker_count();

/// Calls body(i) exactly once for every i in [0, count).
///
/// Work is handed out index by index, so callers that write into slot i and
/// reduce the slots in index order get results that are independent of the
/// worker count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fpl
