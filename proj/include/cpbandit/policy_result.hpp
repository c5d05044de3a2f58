#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace cpbandit {

enum class Decision { ZoomLeft, ZoomRight, Backtrack };

std::string_view to_string(Decision d);

/// Which halving variant SHA handed the remaining budget to.
enum class HalvingKind { SH, SHB };

std::string_view to_string(HalvingKind k);

struct ShaDecision {
  double delta_hat = 0.0;
  double tau = 0.0;  // +inf when delta_hat == 0
  HalvingKind chosen = HalvingKind::SH;
};

/// Per-phase diagnostics. Means for slots 0 and 1 are NaN under SH.
struct PhaseRecord {
  std::uint64_t phase = 0;  // 1-based
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  std::array<double, 5> means{};  // slots 0, a1, a2, a3, 1
  std::uint64_t pulls_per_slot = 0;
  Decision decision = Decision::ZoomLeft;
};

struct PolicyResult {
  double estimate = 0.0;
  std::uint64_t pulls_used = 0;
  std::vector<Decision> trace;
  std::vector<PhaseRecord> phases;
  std::optional<ShaDecision> dispatch;
};

}  // namespace cpbandit
