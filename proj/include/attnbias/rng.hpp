#pragma once

#include <cstdint>

#include "attnbias/matrix.hpp"

namespace attnbias {

// Deterministic splittable PRNG: SplitMix64.
//
// The generator is pinned byte-exactly so that identical seeds produce
// identical streams on every platform:
//
//   state  <- state + 0x9E3779B97F4A7C15          (golden-gamma increment)
//   z      <- state
//   z      <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
//   z      <- (z XOR (z >> 27)) * 0x94D049BB133111EB
//   output <- z XOR (z >> 31)
//
// next_double() keeps the top 53 bits of the output: (out >> 11) * 2^-53,
// uniform in [0, 1). uniform_pm1() maps that to [-1, 1).
//
// split(stream) derives an independent child generator without consuming
// state: child seed = finalize(seed + (stream + 1) * 0x9E3779B97F4A7C15),
// where finalize is the three-step mix above applied once.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [-1, 1).
  double uniform_pm1() noexcept { return 2.0 * next_double() - 1.0; }

  // Uniform integer in [0, bound). bound must be > 0. Uses a plain modulo;
  // the bias is below 2^-53 for every bound used here.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    return next_u64() % bound;
  }

  // Child generator for a named substream; independent of draws made so far.
  Rng split(std::uint64_t stream) const noexcept {
    return Rng(finalize(seed_ + (stream + 1) * 0x9E3779B97F4A7C15ULL));
  }

  static std::uint64_t finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// FNV-1a 64-bit hash; used to derive per-check RNG substreams from names.
inline std::uint64_t fnv1a64(const char* s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (; *s; ++s) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*s));
    h *= 0x100000001B3ULL;
  }
  return h;
}

// rows x cols matrix with entries i.i.d. uniform in [-1, 1), filled row-major.
inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform_pm1();
  return m;
}

// Fisher-Yates shuffle of 0..n-1.
inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace attnbias
