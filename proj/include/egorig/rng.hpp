#pragma once

// Seed derivation so every randomized consumer (per-sensor noise, dropout)
// gets an independent, reproducible stream from one scenario seed.

#include <cstdint>

namespace egorig {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic child seed for (stream, salt) under a base seed.
inline uint64_t deriveSeed(uint64_t base, uint64_t stream, uint64_t salt) {
  uint64_t s = base;
  s ^= splitmix64(s) + 0x9E3779B97F4A7C15ull * (stream + 1);
  s ^= splitmix64(s) + 0x94D049BB133111EBull * (salt + 1);
  return splitmix64(s);
}

}  // namespace egorig
