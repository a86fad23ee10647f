#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace sep {

// splitmix64 finalizer; stateless seed mixing.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// One seed per session, derived from the master seed and the session index.
// Every role derives its own stream from the session seed, so separate
// processes reproduce the exact choices of an in-process run.
constexpr std::uint64_t session_seed(std::uint64_t master_seed, std::uint64_t session_index) {
  return mix64(master_seed ^ mix64(session_index + 1));
}

enum class Stream : std::uint64_t { ca = 1, re = 2 };

constexpr std::uint64_t stream_seed(std::uint64_t session, Stream stream) {
  return mix64(session ^ mix64(static_cast<std::uint64_t>(stream) << 32));
}

// mt19937_64 with hand-rolled bounded sampling. std::uniform_int_distribution
// is implementation-defined, which would break transcript replay across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform draw from [0, bound); bound >= 1. Masked rejection keeps the
  // draw unbiased.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    std::uint64_t value;
    do {
      value = gen_() & mask;
    } while (value >= bound);
    return value;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sep
