#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace costrule {

// Counter-based seed derivation so that replication r of a run with master
// seed s always gets the same child stream, regardless of execution order.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter) {
  // splitmix64 finalizer applied to the combined state
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Thin wrapper over std::mt19937_64 that maps raw bits to doubles itself.
// The engine's output sequence is fully specified by the standard, so the
// same seed gives the same draws on every platform; the std distribution
// objects do not make that promise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform on (0,1), never exactly 0 or 1 (safe under log)
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; one draw per call, pair partner discarded
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

} // namespace costrule
