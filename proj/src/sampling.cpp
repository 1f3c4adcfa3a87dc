#include "levikit/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace levikit {

namespace {
std::atomic<int> g_threads{0};
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Rng make_stream(std::uint64_t seed, std::string_view check, std::uint64_t index) {
  const std::uint64_t key = fnv1a(check);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

Point random_direction(Rng& rng, int n) {
  Point v(static_cast<std::size_t>(n));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& c : v) {
      c = {normal(rng), normal(rng)};
      norm2 += std::norm(c);
    }
  } while (norm2 < 1e-24);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : v) c *= inv;
  return v;
}

cplx random_in_disc(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng));
  const double theta = uniform(rng, 0.0, 2.0 * M_PI);
  return std::polar(r, theta);
}

int thread_count() {
  const int t = g_threads.load();
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(int threads) { g_threads.store(std::max(0, threads)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace levikit
