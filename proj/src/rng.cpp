#include "cpbandit/rng.hpp"

namespace cpbandit {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t master_seed, std::uint64_t stream_index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(stream_index), hi(stream_index)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(seeded_engine(master_seed, stream_index)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

}  // namespace cpbandit
