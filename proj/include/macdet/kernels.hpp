#pragma once

// OpenMP loop drivers. Every parallel driver has a serial twin that visits the
// same indices in order; results are combined by integer sums or written to
// per-index slots, so both produce identical output.

#include <omp.h>

#include <cstdint>
#include <exception>
#include <mutex>

namespace macdet::kernels {

inline std::uint64_t block_count(std::uint64_t trials, std::uint64_t block) {
  return (trials + block - 1) / block;
}

inline std::uint64_t block_size(std::uint64_t k, std::uint64_t trials, std::uint64_t block) {
  const std::uint64_t start = k * block;
  return trials - start < block ? trials - start : block;
}

inline int resolve_threads(int threads) {
  return threads > 0 ? threads : omp_get_max_threads();
}

// fn(block_index, trials_in_block) -> error count
template <class BlockFn>
std::uint64_t run_blocks_serial(std::uint64_t trials, std::uint64_t block, BlockFn&& fn) {
  std::uint64_t total = 0;
  const std::uint64_t n = block_count(trials, block);
  for (std::uint64_t k = 0; k < n; ++k) total += fn(k, block_size(k, trials, block));
  return total;
}

template <class BlockFn>
std::uint64_t run_blocks_parallel(std::uint64_t trials, std::uint64_t block, int threads,
                                  BlockFn&& fn) {
  std::uint64_t total = 0;
  const auto n = static_cast<std::int64_t>(block_count(trials, block));
#pragma omp parallel for schedule(static) reduction(+ : total) num_threads(resolve_threads(threads))
  for (std::int64_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::uint64_t>(k);
    total += fn(idx, block_size(idx, trials, block));
  }
  return total;
}

// fn(i) for i in [0, n); the first exception thrown is rethrown after the loop.
template <class IndexFn>
void for_each_index_serial(std::int64_t n, IndexFn&& fn) {
  for (std::int64_t i = 0; i < n; ++i) fn(i);
}

template <class IndexFn>
void for_each_index_parallel(std::int64_t n, int threads, IndexFn&& fn) {
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace macdet::kernels
