#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "cpbandit/env.hpp"
#include "cpbandit/policy_result.hpp"
#include "cpbandit/rng.hpp"

namespace cpbandit::offline {

// Split indices are 1-based: r splits values[0..r) from values[r..n).

/// r(n-r)/n * (mean(1..r) - mean(r+1..n))^2. Throws SplitOutOfRange unless 1 <= r <= n-1.
double split_score(std::span<const double> values, std::size_t r);

/// Smallest r in 1..n-1 maximising split_score, equivalently minimising the
/// two-segment residual sum of squares. O(n) via prefix sums. Throws SampleTooShort.
std::size_t best_split(std::span<const double> values);

/// Non-adaptive baseline: G evenly spaced actions (i-1)/(G-1), each played
/// floor(T/G) times; the estimate is the midpoint between the grid points on
/// either side of the best split of the per-point means.
PolicyResult run_grid_ls(const Environment& env, std::uint64_t budget, double eta,
                         std::uint64_t grid_points, RngStream& rng);

/// 2 * ceil(1/(2 eta)).
std::uint64_t default_grid_points(double eta);

}  // namespace cpbandit::offline
