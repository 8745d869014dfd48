#ifndef PACEKIT_SRC_PARALLEL_HPP
#define PACEKIT_SRC_PARALLEL_HPP

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pacekit::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PACEKIT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, count) across workers. Each index writes only
// its own output slot, so scheduling never affects results.
template <typename Body>
void parallel_for(std::int64_t count, int threads, const Body& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += threads) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pacekit::detail

#endif  // PACEKIT_SRC_PARALLEL_HPP
