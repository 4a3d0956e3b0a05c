#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace topofuse {

// splitmix64; used to derive independent substream seeds from a master seed.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t salt) {
  return splitmix64(master ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

// mt19937_64 with hand-rolled variate transforms. The standard distribution
// objects are implementation-defined, so sampling goes through fixed formulas
// to keep seeded runs byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // uniform on [0,1) with 53-bit resolution
  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return u01() < p; }

  int coin() { return static_cast<int>(engine_() & 1ULL); }

  // exponential with given rate (mean 1/rate)
  double exponential(double rate) { return -std::log1p(-u01()) / rate; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace topofuse
