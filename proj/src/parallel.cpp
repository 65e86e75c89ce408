#include "modecap/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace modecap {

int worker_count()
{
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0)
    hw = 1;
  if (char const *env = std::getenv("MODECAP_THREADS")) {
    try {
      int const cap = std::stoi(env);
      if (cap > 0)
        hw = std::min(hw, cap);
    } catch (std::exception const &) {
      // unparsable value: ignore the cap
    }
  }
  return hw;
}

void parallel_for(std::size_t count, std::function<void(std::size_t)> const &body)
{
  if (count == 0)
    return;
  std::size_t const workers = std::min<std::size_t>(count, static_cast<std::size_t>(worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t const begin = count * w / workers;
      std::size_t const end = count * (w + 1) / workers;
      try {
        for (std::size_t i = begin; i < end; ++i)
          body(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure)
          failure = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace modecap
