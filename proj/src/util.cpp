#include "wint/util.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace wint {

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mutex;

  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };

  std::vector<std::thread> pool;
  int nthreads = std::min(workers, n);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wint
