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

// Training-set collection from fuzzer output trees.

#ifndef SEEDFORGE_CORPUS_HPP_
#define SEEDFORGE_CORPUS_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/digest.hpp"
#include "seedforge/error.hpp"

namespace seedforge {

enum class SourceKind { kQueue, kCrash };

inline const char *SourceKindName(SourceKind kind) {
  return kind == SourceKind::kCrash ? "crash" : "queue";
}

// Inclusive byte-size bounds. The default is the 12 KB .. 17 KB window.
struct SizeWindow {
  uint64_t min_bytes = 12 * 1024;
  uint64_t max_bytes = 17 * 1024;

  static SizeWindow Unbounded() { return {0, std::numeric_limits<uint64_t>::max()}; }
  bool contains(uint64_t size) const { return size >= min_bytes && size <= max_bytes; }
  bool operator==(const SizeWindow &) const = default;
};

struct ManifestEntry {
  std::string path;
  uint64_t size = 0;
  std::string digest;
  SourceKind kind = SourceKind::kQueue;

  bool operator==(const ManifestEntry &) const = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  SizeWindow window;
  std::string created_at;

  // created_at is a label, not content: two manifests over the same tree
  // compare equal regardless of when they were built.
  bool operator==(const CorpusManifest &o) const {
    return entries == o.entries && window == o.window;
  }
};

struct TrainingBatch {
  std::vector<SeedMatrix> matrices;
  std::vector<std::string> digests;
};

namespace internal {

inline std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline bool IsHidden(const std::filesystem::path &p) {
  const std::string name = p.filename().string();
  return !name.empty() && name[0] == '.';
}

struct Candidate {
  std::filesystem::path path;
  SourceKind kind;
};

// AFL layout: only queue/ and crashes/ are scanned when present (hangs/ and
// the bookkeeping files next to them are skipped). Otherwise every regular
// file in the tree counts as a queue file.
inline void CollectRoot(const std::filesystem::path &root, std::vector<Candidate> &out) {
  namespace fs = std::filesystem;
  auto scan = [&out](const fs::path &dir, SourceKind kind) {
    for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator();
         ++it) {
      if (IsHidden(it->path())) {
        if (it->is_directory()) it.disable_recursion_pending();
        continue;
      }
      if (it->is_directory() && it->path().filename() == "hangs") {
        it.disable_recursion_pending();
        continue;
      }
      if (it->is_regular_file()) out.push_back({it->path(), kind});
    }
  };
  const bool has_queue = fs::is_directory(root / "queue");
  const bool has_crashes = fs::is_directory(root / "crashes");
  if (has_queue || has_crashes) {
    if (has_queue) scan(root / "queue", SourceKind::kQueue);
    if (has_crashes) scan(root / "crashes", SourceKind::kCrash);
    return;
  }
  scan(root, SourceKind::kQueue);
}

}  // namespace internal

// Scans `dirs` for files within `window`, dropping any larger than
// `capacity_bytes` when given, and deduplicates by SHA-256 keeping the
// lexicographically first path. Entries are ordered by path.
inline CorpusManifest Harvest(const std::vector<std::filesystem::path> &dirs, SizeWindow window,
                              std::optional<uint64_t> capacity_bytes = std::nullopt) {
  namespace fs = std::filesystem;
  std::vector<internal::Candidate> candidates;
  for (const auto &dir : dirs) {
    if (!fs::is_directory(dir)) {
      throw Error(ErrorCode::kNoSuchDirectory, dir.string());
    }
    internal::CollectRoot(dir, candidates);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto &a, const auto &b) { return a.path.string() < b.path.string(); });

  CorpusManifest manifest;
  manifest.window = window;
  manifest.created_at = internal::UtcTimestamp();
  std::unordered_set<std::string> seen;
  for (const auto &c : candidates) {
    const uint64_t size = fs::file_size(c.path);
    if (!window.contains(size)) continue;
    if (capacity_bytes && size > *capacity_bytes) continue;
    const Bytes data = ReadBytes(c.path);
    std::string digest = Sha256Hex(data);
    if (!seen.insert(digest).second) continue;
    manifest.entries.push_back({c.path.string(), size, std::move(digest), c.kind});
  }
  if (manifest.entries.empty()) {
    throw Error(ErrorCode::kEmptyHarvest, "no files within [" + std::to_string(window.min_bytes) +
                                              ", " + std::to_string(window.max_bytes) + "]");
  }
  return manifest;
}

// Harvest with the codec's capacity as an extra upper bound.
inline CorpusManifest Harvest(const std::vector<std::filesystem::path> &dirs, SizeWindow window,
                              const CodecConfig &cfg) {
  return Harvest(dirs, window, cfg.byte_capacity());
}

inline TrainingBatch LoadTrainingBatch(const CorpusManifest &manifest,
                                       std::span<const size_t> indices, const CodecConfig &cfg) {
  TrainingBatch batch;
  batch.matrices.reserve(indices.size());
  for (size_t idx : indices) {
    if (idx >= manifest.entries.size()) {
      throw Error(ErrorCode::kInvalidArgument, "manifest index " + std::to_string(idx));
    }
    const ManifestEntry &e = manifest.entries[idx];
    const Bytes data = ReadBytes(e.path);
    if (Sha256Hex(data) != e.digest) {
      throw Error(ErrorCode::kDigestMismatch, e.path);
    }
    batch.matrices.push_back(EncodeBytes(data, cfg));
    batch.digests.push_back(e.digest);
  }
  return batch;
}

inline TrainingBatch LoadTrainingBatch(const CorpusManifest &manifest, const CodecConfig &cfg) {
  std::vector<size_t> all(manifest.entries.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return LoadTrainingBatch(manifest, all, cfg);
}

inline nlohmann::json ManifestToJson(const CorpusManifest &m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &e : m.entries) {
    entries.push_back({{"path", e.path},
                       {"size", e.size},
                       {"digest", e.digest},
                       {"kind", SourceKindName(e.kind)}});
  }
  return {{"window", {m.window.min_bytes, m.window.max_bytes}},
          {"created_at", m.created_at},
          {"entries", std::move(entries)}};
}

inline CorpusManifest ManifestFromJson(const nlohmann::json &j) {
  try {
    CorpusManifest m;
    m.window = {j.at("window").at(0).get<uint64_t>(), j.at("window").at(1).get<uint64_t>()};
    m.created_at = j.value("created_at", "");
    for (const auto &e : j.at("entries")) {
      const std::string kind = e.at("kind").get<std::string>();
      if (kind != "queue" && kind != "crash") {
        throw Error(ErrorCode::kInvalidArgument, "manifest entry kind '" + kind + "'");
      }
      m.entries.push_back({e.at("path").get<std::string>(), e.at("size").get<uint64_t>(),
                           e.at("digest").get<std::string>(),
                           kind == "crash" ? SourceKind::kCrash : SourceKind::kQueue});
    }
    return m;
  } catch (const nlohmann::json::exception &ex) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed manifest: ") + ex.what());
  }
}

inline void SaveManifest(const std::filesystem::path &path, const CorpusManifest &m) {
  internal::WriteWholeFile(path, ManifestToJson(m).dump(2) + "\n");
}

inline CorpusManifest LoadManifest(const std::filesystem::path &path) {
  const std::string text = internal::ReadWholeFile(path);
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "manifest is not JSON");
  return ManifestFromJson(j);
}

}  // namespace seedforge

#endif  // SEEDFORGE_CORPUS_HPP_
