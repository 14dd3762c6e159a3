#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace devaudit::parallel {

/// Scans indices [0, count) in chunks and returns the result for the
/// smallest index where `probe` yields a value. Workers skip chunks that
/// start after the best hit found so far, so the answer equals the
/// sequential scan for any job count.
template <class T, class Probe>
std::optional<T> first_hit(std::uint64_t count, unsigned jobs, Probe probe) {
  if (jobs <= 1 || count < 2) {
    for (std::uint64_t k = 0; k < count; ++k) {
      if (auto v = probe(k)) return v;
    }
    return std::nullopt;
  }
  const std::uint64_t chunk = std::max<std::uint64_t>(1, count / (std::uint64_t{jobs} * 16));
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  std::mutex lock;
  std::optional<T> result;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      while (true) {
        const auto start = next.fetch_add(chunk);
        if (start >= count || start > best.load()) return;
        const auto stop = std::min(count, start + chunk);
        for (auto k = start; k < stop && k < best.load(); ++k) {
          if (auto v = probe(k)) {
            std::lock_guard guard(lock);
            if (k < best.load()) {
              best = k;
              result = std::move(v);
            }
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard guard(lock);
      if (!failure) failure = std::current_exception();
      best = 0;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

/// Runs `work(k)` for k in [0, count) and concatenates the per-index
/// outputs in index order.
template <class T, class Work>
std::vector<T> collect(std::uint64_t count, unsigned jobs, Work work) {
  std::vector<std::vector<T>> parts(static_cast<std::size_t>(count));
  if (jobs <= 1) {
    for (std::uint64_t k = 0; k < count; ++k) parts[k] = work(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex lock;
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        try {
          for (auto k = next++; k < count; k = next++) parts[k] = work(k);
        } catch (...) {
          std::lock_guard guard(lock);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<T> out;
  for (auto& p : parts) {
    for (auto& v : p) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace devaudit::parallel
