// Copyright 2026 The SeedForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDFORGE_RNG_HPP_
#define SEEDFORGE_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace seedforge {

using Rng = std::mt19937_64;

constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a tuple of
// stream coordinates (step, iteration, sample index, ...).
constexpr uint64_t DeriveSeed(uint64_t base) { return SplitMix64(base); }

template <typename... Rest>
constexpr uint64_t DeriveSeed(uint64_t base, uint64_t first, Rest... rest) {
  return DeriveSeed(SplitMix64(base) ^ SplitMix64(first + 0x632be59bd9b4e019ULL),
                    static_cast<uint64_t>(rest)...);
}

inline Rng MakeRng(uint64_t seed) { return Rng(SplitMix64(seed)); }

// Uniform integer in [0, bound). bound must be > 0.
inline uint64_t UniformBelow(Rng &rng, uint64_t bound) {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

// Uniform real in [0, 1).
inline double UniformUnit(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace seedforge

#endif  // SEEDFORGE_RNG_HPP_
