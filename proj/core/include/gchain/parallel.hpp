#pragma once

#include <cstddef>
#include <functional>

namespace gchain {

/// Runs body(0..count-1) on up to `workers` threads. Tasks must write to
/// disjoint slots; schedule order is unspecified, so reductions over the
/// slots must happen in index order after the call for determinism.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

unsigned hardware_workers();

} // namespace gchain
