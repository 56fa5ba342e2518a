#include "speclab/parallel.hpp"

#include <cstdlib>
#include <string>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

int initial_threads() {
  if (const char* env = std::getenv("SPECLAB_THREADS")) {
    const int count = std::atoi(env);
    if (count >= 1) return count;
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> value{initial_threads()};
  return value;
}

}  // namespace

int worker_threads() { return thread_setting().load(); }

void set_worker_threads(int count) {
  if (count < 1) throw DomainError("worker thread count must be >= 1, got " + std::to_string(count));
  thread_setting().store(count);
}

}  // namespace speclab
