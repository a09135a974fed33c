#pragma once

#include <cstddef>

#include "scout/parallel.hpp"

namespace scout {

/// Execution route for data-parallel kernels. `serial` is the reference path
/// that tests compare against; both must give bit-identical results.
enum class Exec { parallel, serial };

template <typename Fn>
void run_indexed(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  } else {
    parallel_for(n, std::forward<Fn>(fn));
  }
}

}  // namespace scout
