#pragma once

#include <cstdint>
#include <functional>

namespace mtlab {

/// Worker count: requested if positive, else MT_LAB_THREADS, else the hardware count.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; the first exception thrown is rethrown after joining.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &body);

/// Stable 64-bit mix of (seed, index), independent of platform and thread count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace mtlab
