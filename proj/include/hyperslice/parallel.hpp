#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace hyperslice {

/// Splits [0, total) into `workers` contiguous ranges and runs fn(begin, end)
/// on each, one thread per range.  Results come back in range order, so any
/// associative merge of them is independent of scheduling.  The first
/// exception (in range order) is rethrown.
template <class Fn>
auto parallel_ranges(std::uint64_t total, unsigned workers, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  if (workers < 1) workers = 1;
  if (workers > total) workers = total == 0 ? 1 : static_cast<unsigned>(total);
  std::vector<R> results(workers);
  if (workers == 1) {
    results[0] = fn(std::uint64_t{0}, total);
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          results[w] = fn(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace hyperslice
