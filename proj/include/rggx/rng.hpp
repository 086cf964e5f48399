#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rggx {

/// Counter-based random stream (Philox4x32-10) keyed by a 64-bit seed and a
/// 64-bit stream id. Draw i of stream (seed, id) is a pure function of
/// (seed, id, i), so replications can run in any order or in parallel and
/// still reproduce bit-for-bit.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Poisson(mean): inversion below mean 30, PTRS transformed rejection above.
  std::int64_t poisson(double mean);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  std::uint64_t blocks_used() const { return counter_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Raw Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

}  // namespace rggx
