#include "cpbandit/halving.hpp"

#include <cmath>
#include <limits>

#include "cpbandit/errors.hpp"

namespace cpbandit {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::ZoomLeft: return "zoom_left";
    case Decision::ZoomRight: return "zoom_right";
    case Decision::Backtrack: return "backtrack";
  }
  return "zoom_left";
}

std::string_view to_string(HalvingKind k) { return k == HalvingKind::SH ? "sh" : "shb"; }

namespace halving {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0 && eta < 0.5)) {
    throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1/2), got " + std::to_string(eta));
  }
}

// Ceiling that forgives rounding noise around exact integers, e.g.
// 6 ln(1/(2 eta)) at eta = 1/(2e) comes out as 6.000000000000001.
std::uint64_t snapped_ceil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::uint64_t>(nearest);
  }
  return static_cast<std::uint64_t>(std::ceil(x));
}

double slot_mean(const Environment& env, double x, std::uint64_t pulls, RngStream& rng) {
  double sum = 0.0;
  for (std::uint64_t k = 0; k < pulls; ++k) sum += sample_reward(env, x, rng);
  return sum / static_cast<double>(pulls);
}

Schedule make_schedule(std::uint64_t budget, std::uint64_t phases, std::uint64_t slots,
                       const char* name) {
  Schedule s{phases, budget / (slots * phases), slots};
  if (s.pulls_per_slot == 0) {
    throw Error(ErrorCode::BudgetTooSmall,
                std::string(name) + " needs T >= " + std::to_string(slots * phases) +
                    " (J=" + std::to_string(phases) + "), got T=" + std::to_string(budget));
  }
  return s;
}

PhaseRecord make_record(std::uint64_t phase, const SamplingSet& s, const PhaseStats& st,
                        Decision d) {
  PhaseRecord rec;
  rec.phase = phase;
  rec.a1 = s.a1;
  rec.a2 = s.a2;
  rec.a3 = s.a3;
  rec.means = {st.mean0, st.mean_a1, st.mean_a2, st.mean_a3, st.mean1};
  rec.pulls_per_slot = st.pulls_per_slot;
  rec.decision = d;
  return rec;
}

}  // namespace

SamplingSet zoom_right(const SamplingSet& s) {
  return {s.a2, 0.5 * (s.a2 + s.a3), s.a3, s.depth + 1};
}

SamplingSet zoom_left(const SamplingSet& s) {
  return {s.a1, 0.5 * (s.a1 + s.a2), s.a2, s.depth + 1};
}

SamplingSet ZoomHistory::pop() {
  SamplingSet s = stack_.back();
  stack_.pop_back();
  return s;
}

SamplingSet backtrack(const SamplingSet& current, ZoomHistory& history) {
  if (history.empty()) return current;
  return history.pop();
}

bool event_er(const PhaseStats& st) {
  return std::abs(st.mean_a1 - st.mean_a2) < std::abs(st.mean_a2 - st.mean_a3);
}

bool event_el(const PhaseStats& st) { return !event_er(st); }

bool event_ep(const PhaseStats& st) {
  const double q1 = std::abs((st.mean0 + st.mean_a1) / 2.0 - (st.mean_a3 + st.mean1) / 2.0);
  const double q2 = std::abs((st.mean0 + st.mean_a1 + st.mean_a3) / 3.0 - st.mean1);
  const double q3 = std::abs(st.mean0 - (st.mean_a1 + st.mean_a3 + st.mean1) / 3.0);
  return q1 < 0.75 * std::max(q2, q3);
}

std::uint64_t phases_sh(double eta) {
  check_eta(eta);
  return std::max<std::uint64_t>(1, snapped_ceil(std::log2(1.0 / (2.0 * eta))));
}

std::uint64_t phases_shb(double eta) {
  check_eta(eta);
  return std::max<std::uint64_t>(1, snapped_ceil(6.0 * std::log(1.0 / (2.0 * eta))));
}

Schedule schedule_sh(std::uint64_t budget, double eta) {
  return make_schedule(budget, phases_sh(eta), 3, "SH");
}

Schedule schedule_shb(std::uint64_t budget, double eta) {
  return make_schedule(budget, phases_shb(eta), 5, "SHB");
}

PolicyResult run_sh(const Environment& env, std::uint64_t budget, double eta, RngStream& rng) {
  const Schedule sched = schedule_sh(budget, eta);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  PolicyResult result;
  result.trace.reserve(sched.phases);
  result.phases.reserve(sched.phases);
  SamplingSet set = SamplingSet::root();
  for (std::uint64_t j = 1; j <= sched.phases; ++j) {
    PhaseStats st;
    st.pulls_per_slot = sched.pulls_per_slot;
    st.mean0 = nan;
    st.mean1 = nan;
    st.mean_a1 = slot_mean(env, set.a1, sched.pulls_per_slot, rng);
    st.mean_a2 = slot_mean(env, set.a2, sched.pulls_per_slot, rng);
    st.mean_a3 = slot_mean(env, set.a3, sched.pulls_per_slot, rng);

    const Decision d = event_er(st) ? Decision::ZoomRight : Decision::ZoomLeft;
    result.phases.push_back(make_record(j, set, st, d));
    result.trace.push_back(d);
    set = d == Decision::ZoomRight ? zoom_right(set) : zoom_left(set);
  }
  result.estimate = set.a2;
  result.pulls_used = sched.pulls_used();
  return result;
}

PolicyResult run_shb(const Environment& env, std::uint64_t budget, double eta, RngStream& rng) {
  const Schedule sched = schedule_shb(budget, eta);

  PolicyResult result;
  result.trace.reserve(sched.phases);
  result.phases.reserve(sched.phases);
  SamplingSet set = SamplingSet::root();
  ZoomHistory history;
  for (std::uint64_t j = 1; j <= sched.phases; ++j) {
    // Five separate slots even when 0/a1 or a3/1 share a location.
    PhaseStats st;
    st.pulls_per_slot = sched.pulls_per_slot;
    st.mean0 = slot_mean(env, 0.0, sched.pulls_per_slot, rng);
    st.mean_a1 = slot_mean(env, set.a1, sched.pulls_per_slot, rng);
    st.mean_a2 = slot_mean(env, set.a2, sched.pulls_per_slot, rng);
    st.mean_a3 = slot_mean(env, set.a3, sched.pulls_per_slot, rng);
    st.mean1 = slot_mean(env, 1.0, sched.pulls_per_slot, rng);

    Decision d;
    SamplingSet next;
    if (event_ep(st)) {
      d = Decision::Backtrack;
      next = backtrack(set, history);
    } else if (event_er(st)) {
      d = Decision::ZoomRight;
      history.push(set);
      next = zoom_right(set);
    } else {
      d = Decision::ZoomLeft;
      history.push(set);
      next = zoom_left(set);
    }
    result.phases.push_back(make_record(j, set, st, d));
    result.trace.push_back(d);
    set = next;
  }
  result.estimate = set.a2;
  result.pulls_used = sched.pulls_used();
  return result;
}

std::vector<std::string> shb_warnings(std::uint64_t budget, double eta) {
  check_eta(eta);
  std::vector<std::string> out;
  if (eta >= 0.25) {
    out.push_back("SHB: eta >= 1/4, the large-budget error guarantee does not apply");
  }
  const double min_budget = 60.0 * std::log(1.0 / (2.0 * eta));
  if (static_cast<double>(budget) <= min_budget) {
    out.push_back("SHB: T=" + std::to_string(budget) + " <= 60 ln(1/(2 eta)) = " +
                  std::to_string(min_budget) + ", the large-budget error guarantee does not apply");
  }
  return out;
}

std::vector<std::string> resolution_warnings(double eta) {
  std::vector<std::string> out;
  if (phases_sh(eta) > 52) {
    out.push_back("eta is below double resolution: sampling points deeper than 2^-52 may coincide");
  }
  return out;
}

}  // namespace halving
}  // namespace cpbandit
