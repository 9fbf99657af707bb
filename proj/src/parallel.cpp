#include "gseq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace gseq {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) {
  g_threads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int thread_count() { return g_threads; }

void parallel_for(long count, const std::function<void(long, long)>& body) {
  const long t = std::max(1L, std::min<long>(g_threads, count / 64));
  if (t == 1) {
    body(0, count);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  std::vector<std::thread> pool;
  for (long w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        body(count * w / t, count * (w + 1) / t);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gseq
