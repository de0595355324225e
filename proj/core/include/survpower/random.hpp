#pragma once

// Seeded random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the standard.
// Variates come from Boost.Random distributions (ziggurat normal and
// exponential, gamma-ratio Beta), whose algorithms are fixed per Boost
// release, so a (seed, stream index) pair reproduces bit-identical draws on a
// given toolchain. Streams for replicate k are derived with SplitMix64 from
// (seed, k), independent of execution order.

#include <cstdint>
#include <random>

namespace survpower {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream `index` under master `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  double uniform();  // [0, 1)
  double normal();
  double exponential();  // rate 1
  double beta(double a, double b);
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t index(std::uint64_t n);  // uniform on [0, n)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace survpower
