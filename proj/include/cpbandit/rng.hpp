#pragma once

#include <cstdint>
#include <random>

namespace cpbandit {

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of the two identifiers, so the sequence is fixed by the C++
/// standard for a given pair. Gaussian draws go through
/// std::normal_distribution and are therefore bit-reproducible within one
/// standard library build, not across vendors.
///
/// A stream is single-owner: never share one between threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  double normal();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cpbandit
