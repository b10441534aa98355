#pragma once

#include <cstdint>
#include <random>

namespace swalk {

/// A reproducible random stream addressed by (seed, stream id).
///
/// The engine is a 64-bit Mersenne twister keyed through std::seed_seq, whose
/// mixing algorithm is fixed by the standard, so the variate sequence is the
/// same on every conforming platform. All continuous variates are derived
/// from raw 64-bit words here rather than through <random> distributions,
/// whose algorithms are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Standard exponential.
  double exponential();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace swalk
