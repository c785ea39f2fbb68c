#pragma once

#include <cstdint>
#include <random>

namespace aoi {

// splitmix64 mixing step; used to decorrelate (seed, stream) pairs before
// seeding the per-trial engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent engine for one trial. Depends only on (seed, stream), never on
// execution order, so parallel runs reproduce sequential ones bit-exactly.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL)));
}

// 53-bit uniform draw in [0,1). Avoids std::uniform_real_distribution so the
// stream is identical across standard-library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace aoi
