#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpbandit/env.hpp"
#include "cpbandit/policy_result.hpp"
#include "cpbandit/rng.hpp"

namespace cpbandit::halving {

/// Active region [a1, a3) with midpoint a2; the global endpoints 0 and 1 are
/// implicit. Width is 2^-depth. Points are dyadic, so midpoints are exact
/// while depth stays within double resolution (~52 near the origin, less
/// away from it); beyond that neighbouring points may coincide.
struct SamplingSet {
  double a1 = 0.0;
  double a2 = 0.5;
  double a3 = 1.0;
  unsigned depth = 0;

  static SamplingSet root() { return {}; }
  double width() const { return a3 - a1; }
  friend bool operator==(const SamplingSet&, const SamplingSet&) = default;
};

/// (a2, (a2+a3)/2, a3)
SamplingSet zoom_right(const SamplingSet& s);
/// (a1, (a1+a2)/2, a2)
SamplingSet zoom_left(const SamplingSet& s);

/// Stack of sets a zoom departed from.
class ZoomHistory {
 public:
  void push(const SamplingSet& s) { stack_.push_back(s); }
  bool empty() const noexcept { return stack_.empty(); }
  std::size_t size() const noexcept { return stack_.size(); }
  const SamplingSet& top() const { return stack_.back(); }
  SamplingSet pop();

 private:
  std::vector<SamplingSet> stack_;
};

/// Undo the most recent zoom. At the root (empty history) this is a no-op.
SamplingSet backtrack(const SamplingSet& current, ZoomHistory& history);

/// Empirical means of one phase. SH leaves mean0/mean1 unset (NaN).
struct PhaseStats {
  double mean0 = 0.0;
  double mean_a1 = 0.0;
  double mean_a2 = 0.0;
  double mean_a3 = 0.0;
  double mean1 = 0.0;
  std::uint64_t pulls_per_slot = 0;
};

/// Larger empirical jump on the right half: |m_a1 - m_a2| < |m_a2 - m_a3|.
bool event_er(const PhaseStats& st);
/// Complement of event_er (ties fall here).
bool event_el(const PhaseStats& st);
/// Change looks to lie outside [a1, a3):
///   Q1 < 3/4 max(Q2, Q3) with
///   Q1 = |(m0+m_a1)/2 - (m_a3+m1)/2|,
///   Q2 = |(m0+m_a1+m_a3)/3 - m1|,
///   Q3 = |m0 - (m_a1+m_a3+m1)/3|.
bool event_ep(const PhaseStats& st);

/// ceil(log2(1/(2 eta))). Throws EtaOutOfRange unless 0 < eta < 1/2.
std::uint64_t phases_sh(double eta);
/// ceil(6 ln(1/(2 eta))).
std::uint64_t phases_shb(double eta);

struct Schedule {
  std::uint64_t phases = 0;
  std::uint64_t pulls_per_slot = 0;
  std::uint64_t slots = 0;

  std::uint64_t pulls_used() const { return phases * pulls_per_slot * slots; }
};

/// J and t_j = floor(T/(3J)). Throws BudgetTooSmall when t_j == 0.
Schedule schedule_sh(std::uint64_t budget, double eta);
/// J and t_j = floor(T/(5J)).
Schedule schedule_shb(std::uint64_t budget, double eta);

PolicyResult run_sh(const Environment& env, std::uint64_t budget, double eta, RngStream& rng);
PolicyResult run_shb(const Environment& env, std::uint64_t budget, double eta, RngStream& rng);

/// Non-fatal diagnostics: SHB's guarantee needs eta < 1/4 and T > 60 ln(1/(2 eta)).
std::vector<std::string> shb_warnings(std::uint64_t budget, double eta);
/// Set when the terminal width 2^-J needed for eta is below double resolution.
std::vector<std::string> resolution_warnings(double eta);

}  // namespace cpbandit::halving
