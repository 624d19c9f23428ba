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

// Byte-level mutation engine in the style of AFL havoc: every call applies
// exactly one operator chosen and parameterized by the caller's rng.

#ifndef SEEDFORGE_MUTATOR_HPP_
#define SEEDFORGE_MUTATOR_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>

#include "seedforge/codec.hpp"
#include "seedforge/rng.hpp"

namespace seedforge {

enum class MutationOp {
  kBitFlip,
  kByteFlip,
  kArith8,
  kArith16,
  kArith32,
  kInteresting8,
  kInteresting16,
  kInteresting32,
  kRandomByte,
  kBlockDuplicate,
  kBlockDelete,
  kSplice,
};
inline constexpr int kMutationOps = 12;
inline constexpr int kArithMax = 35;

inline constexpr std::array<int8_t, 9> kInteresting8 = {-128, -1, 0, 1, 16, 32, 64, 100, 127};
inline constexpr std::array<int16_t, 10> kInteresting16 = {-32768, -129, 128, 255, 256,
                                                           512,    1000, 1024, 4096, 32767};
inline constexpr std::array<int32_t, 8> kInteresting32 = {
    -2147483647 - 1, -100663046, -32769, 32768, 65535, 65536, 100663045, 2147483647};

inline void FlipBit(Bytes &data, size_t offset, int bit) {
  data.at(offset) ^= static_cast<uint8_t>(1u << bit);
}

// Writes `width` bytes of `value` at offset, little- or big-endian.
inline void StoreInt(Bytes &data, size_t offset, uint32_t value, int width, bool big_endian) {
  for (int i = 0; i < width; ++i) {
    const int shift = 8 * (big_endian ? width - 1 - i : i);
    data[offset + i] = static_cast<uint8_t>(value >> shift);
  }
}

inline uint32_t LoadInt(const Bytes &data, size_t offset, int width, bool big_endian) {
  uint32_t v = 0;
  for (int i = 0; i < width; ++i) {
    const int shift = 8 * (big_endian ? width - 1 - i : i);
    v |= uint32_t{data[offset + i]} << shift;
  }
  return v;
}

// AFL-style splice: head of `a` up to a split point, tail of `b` from it.
inline Bytes Splice(std::span<const uint8_t> a, std::span<const uint8_t> b, Rng &rng) {
  const size_t limit = std::min(a.size(), b.size());
  const size_t split = limit == 0 ? 0 : UniformBelow(rng, limit + 1);
  Bytes out(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(std::min(split, a.size())));
  if (split < b.size()) out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(split), b.end());
  return out;
}

// `pool_size` and `pool_at(i)` expose the splice partners (queue entries).
template <typename PoolAt>
Bytes Mutate(std::span<const uint8_t> parent, size_t pool_size, PoolAt &&pool_at, Rng &rng,
             size_t max_size = 64 * 1024) {
  Bytes out(parent.begin(), parent.end());
  auto op = static_cast<MutationOp>(UniformBelow(rng, kMutationOps));
  if (out.empty()) op = pool_size > 0 ? MutationOp::kSplice : MutationOp::kRandomByte;

  auto fits = [&](int width) { return out.size() >= static_cast<size_t>(width); };
  auto pos_for = [&](int width) { return UniformBelow(rng, out.size() - width + 1); };
  auto delta = [&]() { return static_cast<uint32_t>(1 + UniformBelow(rng, kArithMax)); };

  switch (op) {
    case MutationOp::kBitFlip:
      FlipBit(out, UniformBelow(rng, out.size()), static_cast<int>(UniformBelow(rng, 8)));
      break;
    case MutationOp::kByteFlip:
      out[UniformBelow(rng, out.size())] ^= 0xff;
      break;
    case MutationOp::kArith8: {
      const size_t at = UniformBelow(rng, out.size());
      const uint32_t d = delta();
      out[at] = static_cast<uint8_t>(rng() & 1 ? out[at] + d : out[at] - d);
      break;
    }
    case MutationOp::kArith16:
    case MutationOp::kArith32: {
      const int width = op == MutationOp::kArith16 ? 2 : 4;
      if (!fits(width)) {
        out[0] = static_cast<uint8_t>(out[0] + delta());
        break;
      }
      const size_t at = pos_for(width);
      const bool be = rng() & 1;
      const uint32_t d = delta();
      const uint32_t v = LoadInt(out, at, width, be);
      StoreInt(out, at, rng() & 1 ? v + d : v - d, width, be);
      break;
    }
    case MutationOp::kInteresting8:
      out[UniformBelow(rng, out.size())] =
          static_cast<uint8_t>(kInteresting8[UniformBelow(rng, kInteresting8.size())]);
      break;
    case MutationOp::kInteresting16:
    case MutationOp::kInteresting32: {
      const int width = op == MutationOp::kInteresting16 ? 2 : 4;
      if (!fits(width)) {
        out[0] = static_cast<uint8_t>(kInteresting8[UniformBelow(rng, kInteresting8.size())]);
        break;
      }
      const uint32_t v = width == 2
          ? static_cast<uint32_t>(static_cast<uint16_t>(kInteresting16[UniformBelow(rng, kInteresting16.size())]))
          : static_cast<uint32_t>(kInteresting32[UniformBelow(rng, kInteresting32.size())]);
      StoreInt(out, pos_for(width), v, width, rng() & 1);
      break;
    }
    case MutationOp::kRandomByte:
      if (out.empty()) {
        out.push_back(static_cast<uint8_t>(rng()));
      } else {
        out[UniformBelow(rng, out.size())] ^= static_cast<uint8_t>(1 + UniformBelow(rng, 255));
      }
      break;
    case MutationOp::kBlockDuplicate: {
      const size_t len = 1 + UniformBelow(rng, std::min<size_t>(out.size(), 128));
      const size_t from = UniformBelow(rng, out.size() - len + 1);
      const size_t to = UniformBelow(rng, out.size() + 1);
      Bytes block(out.begin() + static_cast<std::ptrdiff_t>(from),
                  out.begin() + static_cast<std::ptrdiff_t>(from + len));
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(to), block.begin(), block.end());
      break;
    }
    case MutationOp::kBlockDelete: {
      if (out.size() < 2) {
        out[0] ^= 0xff;
        break;
      }
      const size_t len = 1 + UniformBelow(rng, std::min<size_t>(out.size() - 1, 128));
      const size_t from = UniformBelow(rng, out.size() - len + 1);
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(from),
                out.begin() + static_cast<std::ptrdiff_t>(from + len));
      break;
    }
    case MutationOp::kSplice: {
      if (pool_size == 0) {
        out[UniformBelow(rng, out.size())] ^= 0xff;
        break;
      }
      std::span<const uint8_t> other = pool_at(UniformBelow(rng, pool_size));
      out = Splice(parent, other, rng);
      if (out.empty() && !other.empty()) out.assign(other.begin(), other.end());
      break;
    }
  }
  if (out.size() > max_size) out.resize(max_size);
  return out;
}

inline Bytes Mutate(std::span<const uint8_t> parent, Rng &rng, size_t max_size = 64 * 1024) {
  return Mutate(parent, 0, [](size_t) { return std::span<const uint8_t>(); }, rng, max_size);
}

}  // namespace seedforge

#endif  // SEEDFORGE_MUTATOR_HPP_
