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

// Synthetic instrumented targets.
//
// A target parses a toy chunked format and reports which (state,
// transition-class) edges it exercised. The format is fixed by a dialect;
// families 2d and 2d+1 share dialect d and differ only in their crash rules
// and edge numbering, so files valuable for one are meaningful to the other.
//
// Layout of a file:
//   magic[4] record*
//   plain record   (types 0..3): type len payload[len]
//   checked record (types 4..7): type len payload[len] checksum
// checksum = (key + sum(payload)) mod 256. Types 6 and 7 are containers
// whose payload is a sequence of sub-records: tag len data[len] checksum.
// Payload fields: payload[0] is the mode byte, payload[1..2] a big-endian
// 16-bit value, payload[3..4] (types 4, 5) a deep tag.
//
// A bad top-level checksum is reported as its own edge and the body is still
// interpreted. Crash rules are chains of two constructs (type, mode) in
// stream order; the second must also carry a value >= the type's high
// threshold. Rule ids are indices, so distinct rules never share an id.

#ifndef SEEDFORGE_TARGET_HPP_
#define SEEDFORGE_TARGET_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedforge/codec.hpp"
#include "seedforge/coverage.hpp"
#include "seedforge/error.hpp"
#include "seedforge/rng.hpp"

namespace seedforge {

inline constexpr int kRecordTypes = 8;
inline constexpr int kPlainTypes = 4;
inline constexpr int kModesPerType = 4;
inline constexpr int kSubTags = 4;
inline constexpr int kCrashRules = 6;
inline constexpr size_t kDefaultMaxInput = 64 * 1024;

struct Dialect {
  uint64_t id = 0;
  std::array<uint8_t, 4> magic{};
  std::array<uint8_t, kRecordTypes> type_codes{};
  std::array<std::array<uint8_t, kModesPerType>, kRecordTypes> modes{};
  std::array<std::array<uint16_t, 2>, kRecordTypes> thresholds{};  // low < high
  std::array<std::array<uint8_t, 2>, kRecordTypes> deep_tags{};
  std::array<uint8_t, kSubTags> sub_tags{};
  uint8_t checksum_key = 0;

  static bool IsChecked(int type) { return type >= kPlainTypes; }
  static bool IsContainer(int type) { return type >= 6; }
  static bool HasDeepTag(int type) { return type == 4 || type == 5; }

  uint8_t Checksum(std::span<const uint8_t> payload) const {
    unsigned sum = checksum_key;
    for (uint8_t b : payload) sum += b;
    return static_cast<uint8_t>(sum);
  }
};

namespace internal {

template <size_t N>
std::array<uint8_t, N> DistinctBytes(Rng &rng) {
  std::array<uint8_t, N> out{};
  std::array<bool, 256> used{};
  for (size_t i = 0; i < N;) {
    const auto b = static_cast<uint8_t>(UniformBelow(rng, 256));
    if (used[b]) continue;
    used[b] = true;
    out[i++] = b;
  }
  return out;
}

}  // namespace internal

inline Dialect MakeDialect(uint64_t id) {
  Rng rng = MakeRng(DeriveSeed(id, 0xd1a1ec7));
  Dialect d;
  d.id = id;
  d.magic = internal::DistinctBytes<4>(rng);
  d.type_codes = internal::DistinctBytes<kRecordTypes>(rng);
  for (auto &m : d.modes) m = internal::DistinctBytes<kModesPerType>(rng);
  for (auto &t : d.thresholds) {
    const auto lo = static_cast<uint16_t>(0x0100 + UniformBelow(rng, 0x3f00));
    const auto hi = static_cast<uint16_t>(0xc000 + UniformBelow(rng, 0x3f00));
    t = {lo, hi};
  }
  for (auto &t : d.deep_tags) t = {static_cast<uint8_t>(rng()), static_cast<uint8_t>(rng())};
  d.sub_tags = internal::DistinctBytes<kSubTags>(rng);
  d.checksum_key = static_cast<uint8_t>(rng());
  return d;
}

struct Construct {
  int type = 0;
  int mode = 0;
  bool operator==(const Construct &) const = default;
};

struct CrashRule {
  Construct first;
  Construct second;  // also needs value >= high threshold of second.type
};

enum class Outcome { kOk, kCrash };

struct ExecResult {
  CoverageMap coverage;
  Outcome outcome = Outcome::kOk;
  uint32_t crash_id = 0;

  bool crashed() const { return outcome == Outcome::kCrash; }
};

// Edge kinds; an edge id hashes (family, kind, a, b).
enum class EdgeKind : uint32_t {
  kEntry = 1,
  kShortInput,
  kMagicByte,
  kMagicFail,
  kMagicOk,
  kTransition,
  kUnknownType,
  kGarbageRun,
  kTruncated,
  kBadChecksum,
  kRecordOk,
  kMode,
  kValue,
  kDeep,
  kSubTag,
  kSubBad,
  kSubOk,
  kSubDeep,
  kEnd,
  kCrash,
  kStepCap,
};

class SyntheticTarget {
 public:
  explicit SyntheticTarget(uint64_t family_seed, size_t max_input = kDefaultMaxInput)
      : family_(family_seed), dialect_(MakeDialect(family_seed >> 1)), max_input_(max_input) {
    Rng rng = MakeRng(DeriveSeed(family_seed, 0xc4a54));
    // Only the rarer modes (1..3) of types 2..7 take part in crash chains.
    for (int r = 0; r < kCrashRules; ++r) {
      CrashRule rule;
      do {
        rule.first = {static_cast<int>(2 + UniformBelow(rng, 6)), static_cast<int>(1 + UniformBelow(rng, 3))};
        rule.second = {static_cast<int>(kPlainTypes + UniformBelow(rng, 4)),
                       static_cast<int>(1 + UniformBelow(rng, 3))};
      } while (rule.first == rule.second || IsKnownRule(rule));
      rules_.push_back(rule);
    }
  }

  // Parses "family:<seed>".
  static SyntheticTarget FromSpec(std::string_view spec) {
    constexpr std::string_view kPrefix = "family:";
    uint64_t seed = 0;
    if (spec.substr(0, kPrefix.size()) != kPrefix) {
      throw Error(ErrorCode::kInvalidArgument, "target spec must look like family:<seed>");
    }
    auto digits = spec.substr(kPrefix.size());
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "bad family seed in '" + std::string(spec) + "'");
    }
    return SyntheticTarget(seed);
  }

  uint64_t family_seed() const { return family_; }
  const Dialect &dialect() const { return dialect_; }
  const std::vector<CrashRule> &crash_rules() const { return rules_; }
  size_t max_input() const { return max_input_; }
  std::string spec() const { return "family:" + std::to_string(family_); }

  uint32_t EdgeId(EdgeKind kind, uint32_t a = 0, uint32_t b = 0) const {
    const uint64_t h = DeriveSeed(family_, static_cast<uint64_t>(kind), a, b);
    return static_cast<uint32_t>(h ^ (h >> 32));
  }

  // Inputs beyond max_input() are parsed only up to that length.
  ExecResult Run(std::span<const uint8_t> input) const {
    Parser p{*this, input.first(std::min(input.size(), max_input_)), {}};
    p.Parse();
    p.result.coverage.Normalize();
    return std::move(p.result);
  }

  // A minimal input that triggers crash rule `rule_id`.
  Bytes CrashWitness(size_t rule_id) const {
    const CrashRule &rule = rules_.at(rule_id);
    Bytes out(dialect_.magic.begin(), dialect_.magic.end());
    AppendRecord(out, rule.first.type, rule.first.mode, 0x0000);
    AppendRecord(out, rule.second.type, rule.second.mode, 0xffff);
    return out;
  }

  // Appends a checksum-valid record with the given mode and value.
  void AppendRecord(Bytes &out, int type, int mode, uint16_t value) const {
    Bytes payload = {dialect_.modes[type][mode], static_cast<uint8_t>(value >> 8),
                     static_cast<uint8_t>(value)};
    if (Dialect::HasDeepTag(type)) payload.insert(payload.end(), {0, 0});
    AppendRaw(out, type, payload);
  }

  void AppendRaw(Bytes &out, int type, std::span<const uint8_t> payload) const {
    out.push_back(dialect_.type_codes[type]);
    out.push_back(static_cast<uint8_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    if (Dialect::IsChecked(type)) out.push_back(dialect_.Checksum(payload));
  }

 private:
  static constexpr uint32_t kNoPrev = kRecordTypes;

  bool IsKnownRule(const CrashRule &rule) const {
    return std::any_of(rules_.begin(), rules_.end(), [&](const CrashRule &r) {
      return r.first == rule.first && r.second == rule.second;
    });
  }
  static constexpr size_t kStepCap = 1u << 20;

  struct Parser {
    const SyntheticTarget &t;
    std::span<const uint8_t> in;
    ExecResult result;
    size_t steps = 0;
    std::array<bool, kCrashRules> armed{};

    void Edge(EdgeKind k, uint32_t a = 0, uint32_t b = 0) { result.coverage.AddRaw(t.EdgeId(k, a, b)); }

    static uint32_t Bucket(size_t n) {
      if (n == 0) return 0;
      if (n < 4) return 1;
      if (n < 16) return 2;
      if (n < 64) return 3;
      return 4;
    }

    int TypeIndex(uint8_t code) const {
      for (int i = 0; i < kRecordTypes; ++i)
        if (t.dialect_.type_codes[i] == code) return i;
      return -1;
    }

    int ModeIndex(int type, std::span<const uint8_t> payload) const {
      if (payload.empty()) return kModesPerType;
      for (int j = 0; j < kModesPerType; ++j)
        if (t.dialect_.modes[type][j] == payload[0]) return j;
      return kModesPerType;
    }

    // Returns true when a crash rule fired.
    bool Construct(int type, int mode, int value_class) {
      for (size_t r = 0; r < t.rules_.size(); ++r) {
        const CrashRule &rule = t.rules_[r];
        if (armed[r] && rule.second.type == type && rule.second.mode == mode && value_class == 3) {
          Edge(EdgeKind::kCrash, static_cast<uint32_t>(r));
          result.outcome = Outcome::kCrash;
          result.crash_id = static_cast<uint32_t>(r);
          return true;
        }
      }
      for (size_t r = 0; r < t.rules_.size(); ++r) {
        if (t.rules_[r].first.type == type && t.rules_[r].first.mode == mode) armed[r] = true;
      }
      return false;
    }

    int ValueClass(int type, std::span<const uint8_t> payload) const {
      if (payload.size() < 3) return -1;
      const unsigned v = (unsigned{payload[1]} << 8) | payload[2];
      if (v == 0) return 0;
      if (v < t.dialect_.thresholds[type][0]) return 1;
      if (v < t.dialect_.thresholds[type][1]) return 2;
      return 3;
    }

    // Returns true when a crash rule fired.
    bool RecordBody(int type, std::span<const uint8_t> payload) {
      const int mode = ModeIndex(type, payload);
      Edge(EdgeKind::kMode, static_cast<uint32_t>(type), static_cast<uint32_t>(mode));
      const int vclass = ValueClass(type, payload);
      if (vclass >= 0) Edge(EdgeKind::kValue, static_cast<uint32_t>(type), static_cast<uint32_t>(vclass));
      if (Dialect::HasDeepTag(type) && mode < kModesPerType && payload.size() >= 5 &&
          payload[3] == t.dialect_.deep_tags[type][0] && payload[4] == t.dialect_.deep_tags[type][1]) {
        Edge(EdgeKind::kDeep, static_cast<uint32_t>(type), static_cast<uint32_t>(mode));
      }
      if (Dialect::IsContainer(type) && payload.size() > 3) SubRecords(type, payload.subspan(3));
      return mode < kModesPerType && Construct(type, mode, vclass);
    }

    void SubRecords(int type, std::span<const uint8_t> body) {
      size_t pos = 0;
      while (pos + 2 <= body.size() && ++steps < kStepCap) {
        int tag = kSubTags;
        for (int i = 0; i < kSubTags; ++i)
          if (t.dialect_.sub_tags[i] == body[pos]) tag = i;
        Edge(EdgeKind::kSubTag, static_cast<uint32_t>(type), static_cast<uint32_t>(tag));
        if (tag == kSubTags) {
          ++pos;
          continue;
        }
        const size_t len = body[pos + 1];
        if (pos + 2 + len + 1 > body.size()) {
          Edge(EdgeKind::kSubBad, static_cast<uint32_t>(type), 0);
          return;
        }
        auto data = body.subspan(pos + 2, len);
        if (t.dialect_.Checksum(data) != body[pos + 2 + len]) {
          Edge(EdgeKind::kSubBad, static_cast<uint32_t>(type), 1);
        } else {
          Edge(EdgeKind::kSubOk, static_cast<uint32_t>(type), static_cast<uint32_t>(tag));
          if (tag == kSubTags - 1 && len >= 2 && data[0] == t.dialect_.modes[type][3]) {
            Edge(EdgeKind::kSubDeep, static_cast<uint32_t>(type), data[1] >> 6);
          }
        }
        pos += 3 + len;
      }
    }

    void Parse() {
      Edge(EdgeKind::kEntry);
      if (in.empty()) return;
      if (in.size() < 4) {
        Edge(EdgeKind::kShortInput, static_cast<uint32_t>(in.size()));
        return;
      }
      for (uint32_t i = 0; i < 4; ++i) {
        if (in[i] != t.dialect_.magic[i]) {
          Edge(EdgeKind::kMagicFail, i);
          return;
        }
        Edge(EdgeKind::kMagicByte, i);
      }
      Edge(EdgeKind::kMagicOk);

      size_t pos = 4;
      uint32_t prev = kNoPrev;
      size_t records = 0;
      while (pos < in.size()) {
        if (++steps >= kStepCap) {
          Edge(EdgeKind::kStepCap);
          return;
        }
        const int type = TypeIndex(in[pos]);
        if (type < 0) {
          Edge(EdgeKind::kUnknownType, prev, Bucket(records));
          return;
        }
        Edge(EdgeKind::kTransition, prev, static_cast<uint32_t>(type));
        if (pos + 2 > in.size()) {
          Edge(EdgeKind::kTruncated, static_cast<uint32_t>(type), 0);
          break;
        }
        const size_t len = in[pos + 1];
        const size_t trailer = Dialect::IsChecked(type) ? 1 : 0;
        if (pos + 2 + len + trailer > in.size()) {
          Edge(EdgeKind::kTruncated, static_cast<uint32_t>(type), 1);
          break;
        }
        auto payload = in.subspan(pos + 2, len);
        prev = static_cast<uint32_t>(type);
        pos += 2 + len + trailer;
        if (trailer && t.dialect_.Checksum(payload) != in[pos - 1]) {
          Edge(EdgeKind::kBadChecksum, static_cast<uint32_t>(type));
        } else {
          Edge(EdgeKind::kRecordOk, static_cast<uint32_t>(type), Bucket(len));
        }
        ++records;
        if (RecordBody(type, payload)) return;
      }
      Edge(EdgeKind::kEnd, Bucket(records));
    }
  };

  uint64_t family_;
  Dialect dialect_;
  std::vector<CrashRule> rules_;
  size_t max_input_;
};

// Typical well-formed files of a dialect: mostly plain records in their
// most common mode with small values. Checked records and containers are
// present but uncommon, and rare modes are rarer still.
inline Bytes MakeWellFormedFile(const SyntheticTarget &target, Rng &rng) {
  const Dialect &d = target.dialect();
  Bytes out(d.magic.begin(), d.magic.end());
  const int records = static_cast<int>(4 + UniformBelow(rng, 17));
  for (int r = 0; r < records; ++r) {
    const double u = UniformUnit(rng);
    const int type = u < 0.88 ? static_cast<int>(UniformBelow(rng, kPlainTypes))
                              : static_cast<int>(kPlainTypes + UniformBelow(rng, 4));
    const double mu = UniformUnit(rng);
    const int mode = mu < 0.80 ? 0 : mu < 0.93 ? 1 : mu < 0.98 ? 2 : 3;
    const size_t len = 3 + UniformBelow(rng, 30);
    Bytes payload(len);
    for (auto &b : payload) b = static_cast<uint8_t>(rng());
    payload[0] = d.modes[type][mode];
    const auto lo = d.thresholds[type][0];
    const auto span = static_cast<uint64_t>(d.thresholds[type][1] - lo);
    const auto value = static_cast<uint16_t>(lo + UniformBelow(rng, span));
    payload[1] = static_cast<uint8_t>(value >> 8);
    payload[2] = static_cast<uint8_t>(value);
    if (Dialect::HasDeepTag(type) && len >= 5 && UniformUnit(rng) < 0.1) {
      payload[3] = d.deep_tags[type][0];
      payload[4] = d.deep_tags[type][1];
    }
    if (Dialect::IsContainer(type)) {
      payload.resize(3);
      const int subs = static_cast<int>(1 + UniformBelow(rng, 3));
      for (int s = 0; s < subs; ++s) {
        const int tag = static_cast<int>(UniformBelow(rng, kSubTags));
        Bytes data(2 + UniformBelow(rng, 8));
        for (auto &b : data) b = static_cast<uint8_t>(rng());
        payload.push_back(d.sub_tags[tag]);
        payload.push_back(static_cast<uint8_t>(data.size()));
        payload.insert(payload.end(), data.begin(), data.end());
        payload.push_back(d.Checksum(data));
      }
    }
    target.AppendRaw(out, type, payload);
  }
  return out;
}

}  // namespace seedforge

#endif  // SEEDFORGE_TARGET_HPP_
