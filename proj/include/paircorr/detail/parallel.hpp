#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace paircorr::detail {

/// Splits [first, last) into fixed-size blocks, evaluates fn(begin, end) for
/// each block on up to `threads` workers and returns the results in block
/// order. Block boundaries do not depend on the thread count, so any
/// order-sensitive merge of the results is reproducible.
template <class Result, class Fn>
std::vector<Result> map_blocks(std::uint64_t first, std::uint64_t last, std::uint64_t block_size, unsigned threads,
                               Fn fn) {
  if (last <= first) return {};
  const std::uint64_t blocks = (last - first + block_size - 1) / block_size;
  std::vector<Result> results(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::uint64_t begin = first + b * block_size;
      const std::uint64_t end = std::min(last, begin + block_size);
      try {
        results[b] = fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), blocks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace paircorr::detail
