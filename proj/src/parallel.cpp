#include "rse/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace rse {

unsigned thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("RS_EXTEND_THREADS");
  if (env == nullptr) return hw;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return hw;
  return static_cast<unsigned>(v) < hw ? static_cast<unsigned>(v) : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = thread_cap();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace rse
