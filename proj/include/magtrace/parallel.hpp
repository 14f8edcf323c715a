#ifndef MAGTRACE_PARALLEL_HPP
#define MAGTRACE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace magtrace {

// Number of worker threads. MAGTRACE_THREADS caps it; 0 or unset means auto
// (hardware concurrency).
int thread_count();

// Runs body(i) for i in [0, n). Work items must be independent; results must
// be written to disjoint slots so that the outcome does not depend on the
// schedule. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace magtrace

#endif
