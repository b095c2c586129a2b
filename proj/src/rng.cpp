#include "betarma/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "betarma/special_math.hpp"

namespace barma {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t z) {
  std::uint64_t s = z;
  return splitmix64(s);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  key_ = mix(seed ^ 0xA3EC4E9FD4A61B55ull);
  seed_state();
}

void RngStream::seed_state() {
  std::uint64_t sm = key_;
  for (auto& s : s_) s = splitmix64(sm);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream RngStream::substream(std::uint64_t id) const {
  RngStream child;
  child.key_ = mix(key_ ^ mix(id + kGolden));
  child.seed_state();
  return child;
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  // 52-bit mantissa offset by 1/2 ulp keeps the result strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1p-52;
}

double RngStream::normal() {
  // Inversion keeps the draw a pure function of one uniform.
  return normal_quantile(uniform());
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw std::domain_error("sample_gamma: shape must be positive");
  if (shape == 1.0) return -std::log(rng.uniform());
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace barma
