#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace maxlab {

/// Counter-based generator: the n-th draw of a stream is a pure function of
/// (seed, stream name, n), so corpora reproduce across platforms and across
/// any ordering of the consumers.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace maxlab
