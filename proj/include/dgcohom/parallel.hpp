#pragma once

#include <functional>

namespace dgcohom {

/// Worker count from DGCOHOM_THREADS (default 1).
int thread_count();

/// Runs body(0..n-1) on up to thread_count() threads. Exceptions are
/// rethrown after all workers stop; the lowest failing index wins.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace dgcohom
