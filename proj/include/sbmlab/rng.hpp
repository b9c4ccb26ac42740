#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sbmlab {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used both as the output
// function of the counter generator and as the seed-derivation hash.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent 64-bit seed from a base seed and a tuple of
/// indices: h = mix64(h + 0x9e3779b97f4a7c15 + x) folded left over the
/// arguments, starting from h = seed.
template <class... Ix>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Ix... ix) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h + 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(ix))), ...);
  return h;
}

/// Counter-based generator. Draw i of stream (key) is mix64(key + (i+1)*phi)
/// with phi the 64-bit golden ratio, i.e. SplitMix64 read as a pure function
/// of (key, counter). Any draw can be recomputed from its counter alone, so
/// results do not depend on platform, library or thread layout.
///
/// Uniform doubles take the top 53 bits. Gaussians use the basic Box-Muller
/// transform on two consecutive uniforms, returning the cosine branch only.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept { return at(counter_++); }

  result_type at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t counter() const noexcept { return counter_; }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1], safe for log().
  double uniform_pos() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  double gaussian() noexcept {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Unbiased integer in [0, bound) by rejection on the top bits.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sbmlab
