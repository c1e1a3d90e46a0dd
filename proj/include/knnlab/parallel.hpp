#pragma once

#include <cstddef>
#include <functional>

namespace knnlab {

// KNNLAB_THREADS if set and positive, otherwise hardware concurrency
int default_threads();

// fn(i) for i in [0, n); threads <= 0 means default_threads(). Rethrows the first exception.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace knnlab
