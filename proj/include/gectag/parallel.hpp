#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace gectag {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Order-preserving map over `items` on up to `workers` threads. fn receives
// (index, item). Each worker owns one contiguous block; if several items
// throw, the exception from the lowest index is rethrown.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, unsigned workers, Fn fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t, const In&>> {
  using Out = std::invoke_result_t<Fn&, std::size_t, const In&>;
  std::vector<Out> out(items.size());
  const std::size_t n = items.size();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i, items[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * block, hi = std::min(n, lo + block);
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i, items[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace gectag
