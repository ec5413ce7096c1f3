#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

namespace movwave {

// Each kernel keeps a serial reference path; results are written per index
// and reduced serially so both paths are bitwise identical.
enum class Exec { Serial, Parallel };

// Exceptions raised inside the parallel loop are captured and the first one
// is rethrown on the calling thread.
template <class Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(movwave_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace movwave
