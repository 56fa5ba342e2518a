#pragma once

// Fixed-chunk parallel loops. Chunk boundaries depend only on the problem size, and partial
// results are combined pairwise in chunk order, so sums are bit-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace speclab {

/// Worker threads used by lattice sums and grid scans. Defaults to SPECLAB_THREADS, else 1.
int worker_threads();
void set_worker_threads(int count);

inline constexpr std::size_t kChunkSize = 4096;

/// Calls body(chunk_index, begin, end) for every fixed-size chunk of [0, count).
template <class Body>
void for_each_chunk(std::size_t count, Body&& body) {
  const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
  const auto run = [&](std::size_t c) {
    const std::size_t begin = c * kChunkSize;
    body(c, begin, std::min(count, begin + kChunkSize));
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(worker_threads()), chunks);
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) run(c);
    });
  }
}

/// Pairwise reduction of partials in index order.
template <class T, class Combine>
T pairwise_reduce(std::vector<T> partials, T identity, Combine combine) {
  if (partials.empty()) return identity;
  while (partials.size() > 1) {
    std::vector<T> next((partials.size() + 1) / 2, identity);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = 2 * i + 1 < partials.size() ? combine(partials[2 * i], partials[2 * i + 1]) : partials[2 * i];
    }
    partials = std::move(next);
  }
  return partials.front();
}

/// Sum of term(i) over [0, count), deterministic across thread counts.
template <class Term>
double deterministic_sum(std::size_t count, Term&& term) {
  const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<double> partials(chunks, 0.0);
  for_each_chunk(count, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    partials[c] = s;
  });
  return pairwise_reduce(std::move(partials), 0.0, [](double a, double b) { return a + b; });
}

/// Evaluates body(i) for each i in [0, count); bodies must write disjoint outputs.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  for_each_chunk(count, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace speclab
