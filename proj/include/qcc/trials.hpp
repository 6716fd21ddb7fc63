#pragma once

// Seeded Monte-Carlo plumbing shared by every module that estimates a
// probability: per-trial streams are derived from (base_seed, trial index)
// and results are stored by index, so the aggregate does not depend on how
// trials are scheduled across threads.

#include "qcc/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qcc {

struct Estimate {
  long successes = 0;
  long trials = 0;

  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
  /// sqrt(p(1 - p) / trials)
  double std_error() const {
    if (trials == 0) return 0.0;
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / trials);
  }
};

/// Evaluates fn(rng, trial) for trial in [0, trials) with rng seeded by
/// mix64(base_seed, trial). Output order is trial order.
template <typename Fn>
auto map_trials(long trials, std::uint64_t base_seed, Fn&& fn, unsigned threads = 1)
    -> std::vector<decltype(fn(std::declval<RandomStream&>(), 0L))> {
  using Result = decltype(fn(std::declval<RandomStream&>(), 0L));
  std::vector<Result> out(static_cast<std::size_t>(std::max(trials, 0L)));
  const auto run_one = [&](long i) {
    RandomStream rng = RandomStream::for_trial(base_seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = fn(rng, i);
  };
  if (threads <= 1 || trials < 2) {
    for (long i = 0; i < trials; ++i) run_one(i);
    return out;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (long i = next++; i < trials; i = next++) {
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Counts trials for which pred(rng, trial) is true.
template <typename Pred>
Estimate estimate_probability(long trials, std::uint64_t base_seed, Pred&& pred, unsigned threads = 1) {
  const auto hits = map_trials(
      trials, base_seed, [&](RandomStream& rng, long i) -> char { return pred(rng, i) ? 1 : 0; },
      threads);
  Estimate e;
  e.trials = trials;
  for (char h : hits) e.successes += h;
  return e;
}

}  // namespace qcc
