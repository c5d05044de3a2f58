#include "cpbandit/offline.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cpbandit/errors.hpp"

namespace cpbandit::offline {
namespace {

double score_from_sums(double left_sum, double total, std::size_t r, std::size_t n) {
  const double left_n = static_cast<double>(r);
  const double right_n = static_cast<double>(n - r);
  const double gap = left_sum / left_n - (total - left_sum) / right_n;
  return left_n * right_n / static_cast<double>(n) * gap * gap;
}

}  // namespace

double split_score(std::span<const double> values, std::size_t r) {
  const std::size_t n = values.size();
  if (n < 2 || r < 1 || r > n - 1) {
    throw Error(ErrorCode::SplitOutOfRange,
                "split " + std::to_string(r) + " outside 1.." + std::to_string(n == 0 ? 0 : n - 1));
  }
  double left = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < r) left += values[i];
    total += values[i];
  }
  return score_from_sums(left, total, r, n);
}

std::size_t best_split(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::SampleTooShort, "need at least two values");

  double total = 0.0;
  for (double v : values) total += v;

  std::size_t best = 1;
  double best_score = -1.0;
  double left = 0.0;
  for (std::size_t r = 1; r < n; ++r) {
    left += values[r - 1];
    const double s = score_from_sums(left, total, r, n);
    if (s > best_score) {
      best_score = s;
      best = r;
    }
  }
  return best;
}

std::uint64_t default_grid_points(double eta) {
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1/2)");
  return 2 * static_cast<std::uint64_t>(std::ceil(1.0 / (2.0 * eta)));
}

PolicyResult run_grid_ls(const Environment& env, std::uint64_t budget, double eta,
                         std::uint64_t grid_points, RngStream& rng) {
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1/2)");
  if (grid_points < 2) throw Error(ErrorCode::BudgetTooSmall, "grid needs at least 2 points");
  const std::uint64_t pulls = budget / grid_points;
  if (pulls == 0) {
    throw Error(ErrorCode::BudgetTooSmall, "floor(T/G) = 0 for T=" + std::to_string(budget) +
                                               ", G=" + std::to_string(grid_points));
  }

  const double spacing_den = static_cast<double>(grid_points - 1);
  std::vector<double> means(grid_points);
  for (std::uint64_t i = 0; i < grid_points; ++i) {
    const double x = static_cast<double>(i) / spacing_den;
    double sum = 0.0;
    for (std::uint64_t k = 0; k < pulls; ++k) sum += sample_reward(env, x, rng);
    means[i] = sum / static_cast<double>(pulls);
  }

  const std::size_t r = best_split(means);
  const double left = static_cast<double>(r - 1) / spacing_den;
  const double right = static_cast<double>(r) / spacing_den;

  PolicyResult result;
  result.estimate = 0.5 * (left + right);
  result.pulls_used = grid_points * pulls;
  return result;
}

}  // namespace cpbandit::offline
