#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace kcmab {

/**
 * RngStream — deterministic random stream, one per replication.
 *
 * The core generator is PCG32 (XSH-RR 64/32 with O'Neill's reference
 * constants). A stream is identified by (seed, stream_id); replication r
 * of an experiment uses stream_id = r. For a fixed (seed, stream_id) the
 * raw 32-bit output sequence is bit-identical across platforms and runs.
 * Transforms built from that sequence with +,-,*,/ only (uniform doubles,
 * Bernoulli draws) inherit the bit-exactness; transforms that go through
 * libm (gaussian, gamma, beta) are exact on a given platform and may
 * differ in the last ulp between libm implementations.
 *
 * Raw 32-bit words consumed per call:
 *   next_u32       1
 *   next_double    2   (53-bit mantissa from two words)
 *   next_gaussian  4   (Box-Muller, cosine branch only)
 *   next_gamma     variable (Marsaglia-Tsang rejection, >= 6)
 *   next_beta      variable (ratio of two gamma draws)
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    state_ = 0u;
    inc_ = (stream_id << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
    words_ = 0;
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    ++words_;
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the sine mate is discarded so every
  // call consumes the same number of words.
  double next_gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1], safe under log
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Gamma(shape, 1) by Marsaglia-Tsang; requires shape >= 1.
  double next_gamma(double shape) {
    assert(shape >= 1.0);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x;
      double v;
      do {
        x = next_gaussian();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_double();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b) as Ga/(Ga+Gb); requires a, b >= 1.
  double next_beta(double a, double b) {
    const double x = next_gamma(a);
    const double y = next_gamma(b);
    return x / (x + y);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Raw words drawn since construction (seeding excluded).
  std::uint64_t words_consumed() const { return words_; }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t words_ = 0;
};

}  // namespace kcmab
