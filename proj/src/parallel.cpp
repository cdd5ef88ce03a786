#include "weyl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "weyl/rng.hpp"

namespace weyl {
namespace {

std::atomic<unsigned> g_max_threads{0};

// Fixed chunk count keeps chunk boundaries independent of the thread count.
constexpr std::size_t kChunks = 64;

}  // namespace

void set_max_threads(unsigned threads) { g_max_threads.store(threads); }

unsigned max_threads() noexcept {
  const unsigned t = g_max_threads.load();
  if (t != 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t chunks = std::min(count, kChunks);
  const std::size_t workers = std::min<std::size_t>(max_threads(), chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    for (std::size_t i = lo; i < hi; ++i) body(i);
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0,1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace weyl
