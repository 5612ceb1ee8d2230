#pragma once

#include <cstdint>
#include <random>

#include "wordwalks/common.hpp"

namespace ww {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One deterministic random stream. Streams are derived from a
// (base_seed, stream_index) pair so that trial i always sees the same
// randomness no matter how trials are scheduled. std::mt19937_64 is
// fully specified by the standard; the std distributions are not, so
// uniforms are generated here by hand.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index) {
    std::uint64_t s = base_seed;
    splitmix64_next(s);
    s ^= 0x6a09e667f3bcc909ULL + stream_index * 0x9e3779b97f4a7c15ULL;
    engine_.seed(splitmix64_next(s));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Exactly uniform in [0,n) via rejection sampling.
  std::uint64_t next_below(std::uint64_t n) {
    require(n > 0, "next_below: empty range");
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 engine_;
};

// Reproducible Monte-Carlo run description. Trial i draws its
// randomness from RngStream(seed, i).
struct SimConfig {
  std::uint64_t seed = 0;
  long long horizon = 1;
  int trials = 1;
  int threads = 1;

  void validate() const {
    require(horizon >= 0, "SimConfig: horizon must be >= 0");
    require(trials >= 1, "SimConfig: trials must be >= 1");
    require(threads >= 1, "SimConfig: threads must be >= 1");
  }
};

}  // namespace ww
