#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace sgl {

// Global cap set by the CLI --threads flag; 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, n). Work items must write only to their own
// index-addressed slots; callers do any floating-point reduction afterwards
// in index order so results are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace sgl
