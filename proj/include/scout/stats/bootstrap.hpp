#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "scout/kernels.hpp"
#include "scout/rng.hpp"

namespace scout::stats {

/// n draws with replacement from [0, n).
std::vector<std::size_t> resample_indices(std::size_t n, Rng& rng);

/// Runs `fn(rng)` for B replicates, replicate b seeded from (seed, b). A
/// replicate returning nullopt is recorded as failed. Output order follows b.
template <typename Fn>
std::vector<std::optional<std::vector<double>>> bootstrap_replicates(std::size_t b, std::uint64_t seed, Fn&& fn,
                                                                     Exec exec = Exec::parallel) {
  std::vector<std::optional<std::vector<double>>> out(b);
  run_indexed(exec, b, [&](std::size_t r) {
    Rng rng = Rng::for_replicate(seed, r);
    out[r] = fn(rng);
  });
  return out;
}

/// Type-7 percentile interval; NaNs when `values` is empty.
std::pair<double, double> percentile_ci(std::vector<double> values, double level = 0.95);

/// 2 · min(share <= 0, share >= 0), capped at 1.
double bootstrap_p(const std::vector<double>& values);

}  // namespace scout::stats
