#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace wdsmc {

// Deterministic stream derivation: one master seed plus integer ids
// (step, slot, purpose, ...) identify a substream, so draws never depend
// on thread scheduling or evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_ids(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t id : ids) h = splitmix64(h ^ id);
  return h;
}

// Draw functions are written out explicitly; std::*_distribution algorithms
// are implementation-defined and would tie outputs to the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // (0, 1]
  double uniform_pos() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

  // Box-Muller; two uniforms per draw, no cached spare.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  std::uint64_t uniform_index(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  return Rng(mix_ids(seed, ids));
}

// Substream purpose tags used by the inference engine and the harness.
enum StreamPurpose : std::uint64_t {
  kStreamInit = 1,
  kStreamPropose = 2,
  kStreamAccept = 3,
  kStreamResample = 4,
  kStreamObserve = 5,
  kStreamPlacement = 6,
  kStreamArrival = 7,
  kStreamToy = 8,
};

}  // namespace wdsmc
