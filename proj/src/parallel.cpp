#include "skorohod/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "skorohod/error.hpp"

namespace skorohod {

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (workers < 1) throw ContractViolation("workers must be >= 1");
  std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (chunks <= 1) {
    if (count > 0) body(0, count);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t w = 0; w < chunks; ++w) {
    std::size_t begin = count * w / chunks, end = count * (w + 1) / chunks;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace skorohod
