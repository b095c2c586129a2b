#pragma once

#include <cstdint>

namespace barma {

/// Deterministic splittable random stream.
///
/// The stream identity is a 64-bit key derived from the seed by SplitMix64
/// hashing; substream(id) chains another hash, so a tuple of ids such as
/// (seed, replication, replicate) addresses a fixed, non-overlapping stream
/// regardless of scheduling. Output is xoshiro256++, integer-only, so
/// sequences are bit-identical across platforms.
///
/// A stream must not be shared between concurrent tasks; each task derives
/// its own substream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Independent stream addressed by (this stream's identity, id).
  RngStream substream(std::uint64_t id) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1).
  double uniform();

  /// Standard normal draw by inversion of uniform().
  double normal();

 private:
  RngStream() = default;
  void seed_state();

  std::uint64_t key_ = 0;  // stream identity, used to derive substreams
  std::uint64_t s_[4] = {0, 0, 0, 0};
};

/// Draw from Gamma(shape, scale=1). Marsaglia-Tsang squeeze for shape > 1,
/// inversion -ln U for shape == 1, and the boost G_a = G_{a+1} U^{1/a}
/// below 1. shape <= 0 raises a domain error.
double sample_gamma(double shape, RngStream& rng);

}  // namespace barma
