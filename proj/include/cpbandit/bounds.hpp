#pragma once

#include <cstdint>

namespace cpbandit::bounds {

struct BoundQuery {
  std::uint64_t budget = 0;
  double delta = 1.0;
  double sigma = 1.0;
  double eta = 0.1;
};

/// value is returned unclamped; vacuous marks value >= 1.
struct BoundValue {
  double value = 0.0;
  bool valid = false;
  bool vacuous = false;
};

/// Regime boundary (sigma^2/delta^2)(1.59 ln floor(1/(2 eta)) - 2 ln 2).
/// Natural log. May be negative when floor(1/(2 eta)) is 1 or 2.
double t1_threshold(double delta, double sigma, double eta);

/// SHB upper bound exp(-delta^2 T / (600 sigma^2) + 13 ln(1/(2 eta))).
/// valid iff eta < 1/4 and T > 60 ln(1/(2 eta)).
BoundValue shb_upper(const BoundQuery& q);

/// SH upper bound 2 ceil(log2(1/(2 eta))) exp(-T delta^2 / (36 sigma^2 log2(1/(2 eta)))).
/// valid iff T >= 3 ceil(log2(1/(2 eta))).
BoundValue sh_upper(const BoundQuery& q);

/// Minimax lower bound for large budgets
/// (1/8) exp(-delta^2 T / (2 sigma^2) + 1/2 ln((floor(1/(2 eta)) - 1)/2)).
/// valid iff T >= T1 and floor(1/(2 eta)) >= 2.
BoundValue large_budget_lower(const BoundQuery& q);

/// Minimax lower bound for small budgets
/// exp(-(delta^2 T + 2 sigma^2 ln 2) / (sigma^2 ln floor(1/(2 eta)))).
/// valid iff T < T1 and floor(1/(2 eta)) >= 2.
BoundValue small_budget_lower(const BoundQuery& q);

/// Unspecified universal constants of the SHA bound; there are no defaults.
struct ShaConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Two-branch SHA bound with l = log2(1/(2 eta)) and exploration fraction B:
///   T <  T1: 4 ceil(l) exp(-c1 (1-B) delta^2 T / (sigma^2 l))
///   T >= T1: 5 exp(-c2 B (1-B) delta^2 T / sigma^2 + c3 l)
/// valid iff 2/T < B < 1 - 2/T. Throws DomainError for B outside (0,1).
BoundValue sha_upper(const BoundQuery& q, double exploration_fraction, const ShaConstants& c);

}  // namespace cpbandit::bounds
