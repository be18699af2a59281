#pragma once

// Seedable generator with independently derived streams. All integer draws
// use masked rejection so results do not depend on the standard library's
// distribution implementations.

#include <bit>
#include <cstdint>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

namespace partzdd {

using BigCount = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Generator for sub-stream `index` of master seed `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    while (true) {
      std::uint64_t r = engine_() & mask;
      if (r < bound) return r;
    }
  }

  BigCount below(const BigCount& bound) {
    if (bound <= 1) return 0;
    const std::size_t bits = boost::multiprecision::msb(BigCount(bound - 1)) + 1;
    while (true) {
      BigCount r = 0;
      for (std::size_t got = 0; got < bits; got += 64) {
        r <<= 64;
        r |= engine_();
      }
      const std::size_t excess = ((bits + 63) / 64) * 64 - bits;
      r >>= excess;
      if (r < bound) return r;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace partzdd
