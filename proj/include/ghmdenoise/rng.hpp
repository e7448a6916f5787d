#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ghmdenoise {

/// SplitMix64 finalizer. Used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Combines two values into a seed; mix_seed(a, b) != mix_seed(b, a) in general.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Deterministic random stream.
///
/// Stream mapping (stable, part of the output contract):
///   - the engine is std::mt19937_64 seeded with splitmix64(seed);
///   - uniform_index(n) draws x from the engine and returns x % n, rejecting
///     x < (2^64 - n) % n;
///   - uniform01() is (x >> 11) * 2^-53 for one engine draw x, in [0, 1);
///   - gaussian() uses Box-Muller on u1 = 1 - uniform01(), u2 = uniform01(),
///     returning sqrt(-2 ln u1) cos(2 pi u2) and caching sqrt(-2 ln u1) sin(2 pi u2)
///     for the next call.
/// Only std::mt19937_64 is used from <random>; its output sequence is fixed by
/// the standard, unlike the std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::size_t uniform_index(std::size_t n);
  double uniform01();
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ghmdenoise
