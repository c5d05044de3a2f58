#include "cpbandit/adaptive.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cpbandit/errors.hpp"
#include "cpbandit/halving.hpp"

namespace cpbandit::adaptive {

std::uint64_t default_exploration_pulls(std::uint64_t budget, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::BadExplorationBudget, "L fraction must lie in (0,1)");
  }
  auto pulls = static_cast<std::uint64_t>(std::floor(fraction * static_cast<double>(budget)));
  pulls -= pulls % 2;
  return std::max<std::uint64_t>(pulls, 2);
}

double estimate_delta(const Environment& env, std::uint64_t exploration_pulls, RngStream& rng) {
  if (exploration_pulls < 2 || exploration_pulls % 2 != 0) {
    throw Error(ErrorCode::BadExplorationBudget,
                "L must be even and >= 2, got " + std::to_string(exploration_pulls));
  }
  const std::uint64_t half = exploration_pulls / 2;
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (std::uint64_t k = 0; k < half; ++k) sum0 += sample_reward(env, 0.0, rng);
  for (std::uint64_t k = 0; k < half; ++k) sum1 += sample_reward(env, 1.0, rng);
  return std::abs(sum1 / static_cast<double>(half) - sum0 / static_cast<double>(half));
}

double threshold_tau(double delta_hat, double sigma, double eta, double gamma) {
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1/2)");
  if (!(sigma > 0.0)) throw Error(ErrorCode::NonpositiveSigma, "SHA needs sigma > 0");
  if (!(gamma > 0.0)) throw Error(ErrorCode::DomainError, "gamma must be > 0");
  if (!(delta_hat >= 0.0)) throw Error(ErrorCode::DomainError, "delta_hat must be >= 0");
  if (delta_hat == 0.0) return std::numeric_limits<double>::infinity();
  return gamma * sigma * sigma / (delta_hat * delta_hat) * std::log(1.0 / (2.0 * eta));
}

PolicyResult run_sha(const Environment& env, std::uint64_t budget, double eta,
                     const ShaConfig& cfg, RngStream& rng) {
  const std::uint64_t pulls = cfg.exploration_pulls;
  if (pulls < 2 || pulls % 2 != 0 || pulls + 2 > budget) {
    throw Error(ErrorCode::BadExplorationBudget,
                "L must be even with 2 <= L <= T-2, got L=" + std::to_string(pulls) +
                    ", T=" + std::to_string(budget));
  }
  // Validate before spending any samples.
  threshold_tau(1.0, cfg.sigma, eta, cfg.gamma);

  ShaDecision decision;
  decision.delta_hat = estimate_delta(env, pulls, rng);
  decision.tau = threshold_tau(decision.delta_hat, cfg.sigma, eta, cfg.gamma);
  decision.chosen = static_cast<double>(budget) >= decision.tau ? HalvingKind::SHB : HalvingKind::SH;

  const std::uint64_t rest = budget - pulls;
  PolicyResult result = decision.chosen == HalvingKind::SHB ? halving::run_shb(env, rest, eta, rng)
                                                            : halving::run_sh(env, rest, eta, rng);
  result.pulls_used += pulls;
  result.dispatch = decision;
  return result;
}

}  // namespace cpbandit::adaptive
