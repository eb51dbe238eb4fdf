#include "rrie/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rrie {

unsigned worker_count(unsigned requested) {
  unsigned cap = 0;
  if (const char* env = std::getenv("RRIE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) cap = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // ignored: a malformed value means "no cap"
    }
  }
  unsigned n = requested > 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
  if (cap > 0) n = std::min(n, cap);
  return n;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rrie
