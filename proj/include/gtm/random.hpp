#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace gtm {

/// splitmix64 finalizer; derives independent stream seeds from (seed, stream).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Portable random stream. The engine's output sequence is fixed by the
/// standard; the conversions below avoid the implementation-defined
/// std distributions so results match on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % bound;
    }
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

 private:
  std::mt19937_64 engine_;
};

/// Bernoulli draws at 16-bit resolution, four per 64-bit word. Used on the
/// per-literal hot path where one full draw per literal is too slow.
class LaneDraws {
 public:
  explicit LaneDraws(Rng& rng) : rng_(rng) {}

  static std::uint32_t threshold(double p) {
    return static_cast<std::uint32_t>(std::clamp(std::llround(p * 65536.0), 0LL, 65536LL));
  }

  bool hit(std::uint32_t threshold) {
    if (left_ == 0) {
      word_ = rng_.next();
      left_ = 4;
    }
    const auto v = static_cast<std::uint32_t>(word_ & 0xffff);
    word_ >>= 16;
    --left_;
    return v < threshold;
  }

 private:
  Rng& rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

}  // namespace gtm
