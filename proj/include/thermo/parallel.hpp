#ifndef THERMO_PARALLEL_HPP
#define THERMO_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace thermo {

/// Worker count: THERMOPRESS_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
inline int WorkerCount() {
  if (const char* env = std::getenv("THERMOPRESS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[k] = fn(k) for k in [0, count), evaluated on up to WorkerCount()
/// threads. Results are stored by index, so the output is independent of
/// scheduling. The first exception thrown by any task is rethrown.
template <typename T, typename Fn>
std::vector<T> ParallelMap(int count, Fn fn) {
  std::vector<T> out(count);
  const int workers = std::min(WorkerCount(), count);
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto work = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        out[k] = fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace thermo

#endif  // THERMO_PARALLEL_HPP
