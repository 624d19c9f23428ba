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

#ifndef SEEDFORGE_COVERAGE_HPP_
#define SEEDFORGE_COVERAGE_HPP_

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

#include "seedforge/rng.hpp"

namespace seedforge {

// Set of 32-bit edge identifiers, kept sorted and unique.
class CoverageMap {
 public:
  CoverageMap() = default;
  CoverageMap(std::initializer_list<uint32_t> edges) : edges_(edges) { Normalize(); }
  explicit CoverageMap(std::vector<uint32_t> edges) : edges_(std::move(edges)) { Normalize(); }

  // Unordered insert; call Normalize() before reading.
  void AddRaw(uint32_t edge) { edges_.push_back(edge); }
  void Normalize() {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  void Insert(uint32_t edge) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), edge);
    if (it == edges_.end() || *it != edge) edges_.insert(it, edge);
  }
  void Merge(const CoverageMap &other) {
    std::vector<uint32_t> out;
    out.reserve(edges_.size() + other.edges_.size());
    std::set_union(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end(),
                   std::back_inserter(out));
    edges_ = std::move(out);
  }
  bool Contains(uint32_t edge) const {
    return std::binary_search(edges_.begin(), edges_.end(), edge);
  }
  // True iff some edge of `other` is missing here.
  bool Improves(const CoverageMap &other) const {
    return !std::includes(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end());
  }

  const std::vector<uint32_t> &edges() const { return edges_; }
  size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  bool operator==(const CoverageMap &) const = default;

 private:
  std::vector<uint32_t> edges_;
};

// Digest of the empty edge set.
inline constexpr uint64_t kEmptyPathId = 0xcbf29ce484222325ULL;

// Order-independent 64-bit fingerprint of an edge set: the canonical
// ascending sequence is folded through SplitMix64.
inline uint64_t UniquePathId(const CoverageMap &coverage) {
  uint64_t h = kEmptyPathId;
  for (uint32_t e : coverage.edges()) h = SplitMix64(h ^ e) + 0x9e3779b97f4a7c15ULL * e;
  return h;
}

}  // namespace seedforge

#endif  // SEEDFORGE_COVERAGE_HPP_
