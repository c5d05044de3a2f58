#pragma once

#include <cstdint>

#include "cpbandit/env.hpp"
#include "cpbandit/policy_result.hpp"
#include "cpbandit/rng.hpp"

namespace cpbandit::adaptive {

/// SHA hyperparameters. sigma is the noise scale SHA is told; SH and SHB
/// never see it.
struct ShaConfig {
  double gamma = 120.0;
  std::uint64_t exploration_pulls = 2;  // L: even, 2 <= L <= T - 2
  double sigma = 1.0;
};

/// floor(fraction * T) rounded down to an even number, at least 2.
std::uint64_t default_exploration_pulls(std::uint64_t budget, double fraction = 0.05);

/// L/2 pulls at x = 0 and L/2 at x = 1; returns |mean(1) - mean(0)|.
/// Throws BadExplorationBudget when L is odd or below 2.
double estimate_delta(const Environment& env, std::uint64_t exploration_pulls, RngStream& rng);

/// gamma sigma^2 / delta_hat^2 * ln(1/(2 eta)); +inf when delta_hat == 0.
double threshold_tau(double delta_hat, double sigma, double eta, double gamma);

/// Spend L pulls estimating the gap, then hand T - L to SHB when T >= tau and
/// to SH otherwise. pulls_used includes L; result.dispatch is always set.
PolicyResult run_sha(const Environment& env, std::uint64_t budget, double eta,
                     const ShaConfig& cfg, RngStream& rng);

}  // namespace cpbandit::adaptive
