#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmnoma {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a base seed with a list of stream tags (run index, user, AP, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The conversions to doubles, integers and Gaussians are done here
/// rather than through <random> distributions, whose algorithms differ between
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). Rejection sampling, so unbiased.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform integer on [lo, hi] (inclusive).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Standard normal via Box-Muller (one draw consumes two uniforms).
  double normal();

  /// Circularly symmetric CN(0, 1).
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace mmnoma
