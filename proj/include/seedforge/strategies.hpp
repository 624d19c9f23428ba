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

// Seed-selection baselines: random, AFL-result, peachset (MinSet), hotset
// and AFL-cmin. Ties are always broken by lexicographic path order.

#ifndef SEEDFORGE_STRATEGIES_HPP_
#define SEEDFORGE_STRATEGIES_HPP_

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "seedforge/campaign.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/corpus.hpp"
#include "seedforge/coverage.hpp"
#include "seedforge/error.hpp"
#include "seedforge/rng.hpp"
#include "seedforge/target.hpp"

namespace seedforge {

using SeedSet = std::vector<std::string>;

// Lists the regular files of `dir` (recursively, hidden entries skipped),
// sorted by path.
inline std::vector<std::string> ListPool(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kNoSuchDirectory, dir.string());
  std::vector<std::string> out;
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
    if (internal::IsHidden(it->path())) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file()) out.push_back(it->path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Uniform sample of n distinct pool members (partial Fisher-Yates).
inline SeedSet SelectRandom(const std::vector<std::string> &pool, size_t n, uint64_t rng_seed) {
  if (n > pool.size()) {
    throw Error(ErrorCode::kPoolTooSmall,
                "need " + std::to_string(n) + " files, pool has " + std::to_string(pool.size()));
  }
  std::vector<std::string> work = pool;
  std::sort(work.begin(), work.end());
  Rng rng = MakeRng(DeriveSeed(rng_seed, 0x5e1ec7));
  for (size_t i = 0; i < n; ++i) {
    const size_t j = i + UniformBelow(rng, work.size() - i);
    std::swap(work[i], work[j]);
  }
  work.resize(n);
  return work;
}

// Random sample over the queue and crash files of fuzzer output dirs.
inline SeedSet SelectAflResult(const std::vector<std::filesystem::path> &output_dirs, size_t n,
                               uint64_t rng_seed) {
  const CorpusManifest m = Harvest(output_dirs, SizeWindow::Unbounded());
  std::vector<std::string> pool;
  for (const auto &e : m.entries) pool.push_back(e.path);
  return SelectRandom(pool, n, rng_seed);
}

class CoverageProvider {
 public:
  virtual ~CoverageProvider() = default;
  // Throws CoverageUnavailable when the file has no known coverage.
  virtual CoverageMap Coverage(const std::string &path) = 0;
};

// Runs the synthetic target on the file's bytes; memoized per path.
class TargetCoverageProvider : public CoverageProvider {
 public:
  explicit TargetCoverageProvider(SyntheticTarget target) : target_(std::move(target)) {}

  CoverageMap Coverage(const std::string &path) override {
    if (auto it = memo_.find(path); it != memo_.end()) return it->second;
    Bytes data;
    try {
      data = ReadBytes(path);
    } catch (const Error &e) {
      throw Error(ErrorCode::kCoverageUnavailable, e.what());
    }
    ++evaluations_;
    return memo_.emplace(path, target_.Run(data).coverage).first->second;
  }

  size_t evaluations() const { return evaluations_; }

 private:
  SyntheticTarget target_;
  std::unordered_map<std::string, CoverageMap> memo_;
  size_t evaluations_ = 0;
};

// Coverage ingested from an external dump: one line per file,
// "<path>\t<hex edge>,<hex edge>,...".
class DumpCoverageProvider : public CoverageProvider {
 public:
  DumpCoverageProvider() = default;
  explicit DumpCoverageProvider(std::map<std::string, CoverageMap> table) : table_(std::move(table)) {}

  static DumpCoverageProvider Parse(const std::string &text) {
    std::map<std::string, CoverageMap> table;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument, "coverage dump line " + std::to_string(lineno) + ": no tab");
      }
      std::vector<uint32_t> edges;
      std::string_view rest(line);
      rest.remove_prefix(tab + 1);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string_view tok = rest.substr(0, comma);
        if (tok.starts_with("0x") || tok.starts_with("0X")) tok.remove_prefix(2);
        uint32_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 16);
        if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty()) {
          throw Error(ErrorCode::kInvalidArgument, "coverage dump line " + std::to_string(lineno) +
                                                       ": bad edge id '" + std::string(tok) + "'");
        }
        edges.push_back(v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      table[line.substr(0, tab)] = CoverageMap(std::move(edges));
    }
    return DumpCoverageProvider(std::move(table));
  }

  static DumpCoverageProvider Load(const std::filesystem::path &path) {
    return Parse(internal::ReadWholeFile(path));
  }

  static std::string Format(const std::map<std::string, CoverageMap> &table) {
    std::string out;
    char hex[16];
    for (const auto &[path, cov] : table) {
      out += path;
      out += '\t';
      for (size_t i = 0; i < cov.edges().size(); ++i) {
        if (i) out += ',';
        std::snprintf(hex, sizeof hex, "%x", cov.edges()[i]);
        out += hex;
      }
      out += '\n';
    }
    return out;
  }

  CoverageMap Coverage(const std::string &path) override {
    auto it = table_.find(path);
    if (it == table_.end()) throw Error(ErrorCode::kCoverageUnavailable, path);
    return it->second;
  }

 private:
  std::map<std::string, CoverageMap> table_;
};

namespace internal {

struct Covered {
  std::string path;
  CoverageMap coverage;
  uint64_t size = 0;
};

inline std::vector<Covered> CoverAll(const std::vector<std::string> &pool, CoverageProvider &provider,
                                     bool with_sizes) {
  std::vector<Covered> out;
  out.reserve(pool.size());
  for (const auto &p : pool) {
    Covered c{p, provider.Coverage(p), 0};
    if (with_sizes) {
      std::error_code ec;
      auto size = std::filesystem::file_size(p, ec);
      c.size = ec ? 0 : size;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace internal

// MinSet: scan files by coverage size (descending) and keep each file that
// adds at least one edge to the running union.
inline SeedSet SelectPeachset(const std::vector<std::string> &pool, CoverageProvider &provider) {
  auto files = internal::CoverAll(pool, provider, false);
  std::sort(files.begin(), files.end(), [](const auto &a, const auto &b) {
    if (a.coverage.size() != b.coverage.size()) return a.coverage.size() > b.coverage.size();
    return a.path < b.path;
  });
  SeedSet out;
  CoverageMap united;
  for (const auto &f : files) {
    if (united.Improves(f.coverage)) {
      united.Merge(f.coverage);
      out.push_back(f.path);
    }
  }
  return out;
}

struct SizedCoverage {
  std::string path;
  uint64_t size = 0;
  CoverageMap coverage;
};

// Core of AFL-cmin over explicit (path, size, coverage) triples: the
// smallest covering file wins each edge, then files whose removal keeps the
// union intact are swept out (largest first). A file that alone covers the
// whole union is returned directly (smallest such file), since per-edge
// winners can otherwise miss a one-file optimum.
inline SeedSet SelectCmin(std::vector<SizedCoverage> files) {
  std::sort(files.begin(), files.end(), [](const auto &a, const auto &b) {
    if (a.size != b.size) return a.size < b.size;
    return a.path < b.path;
  });
  CoverageMap united;
  for (const auto &f : files) united.Merge(f.coverage);
  if (united.empty()) return {};
  for (const auto &f : files) {
    if (f.coverage.size() == united.size()) return {f.path};
  }
  std::map<uint32_t, size_t> winner;  // ascending edge id
  for (size_t i = 0; i < files.size(); ++i) {
    for (uint32_t e : files[i].coverage.edges()) winner.try_emplace(e, i);
  }
  std::vector<size_t> chosen;
  for (const auto &[edge, idx] : winner) {
    if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
  }
  // Per-edge multiplicity within the chosen set.
  std::map<uint32_t, int> count;
  for (size_t idx : chosen)
    for (uint32_t e : files[idx].coverage.edges()) ++count[e];
  std::vector<size_t> sweep = chosen;
  std::sort(sweep.begin(), sweep.end(), [&](size_t a, size_t b) {
    if (files[a].size != files[b].size) return files[a].size > files[b].size;
    return files[a].path > files[b].path;
  });
  std::vector<bool> removed(files.size(), false);
  for (size_t idx : sweep) {
    const auto &edges = files[idx].coverage.edges();
    const bool redundant = std::all_of(edges.begin(), edges.end(), [&](uint32_t e) { return count[e] > 1; });
    if (redundant) {
      removed[idx] = true;
      for (uint32_t e : edges) --count[e];
    }
  }
  SeedSet out;
  for (size_t idx : chosen)
    if (!removed[idx]) out.push_back(files[idx].path);
  return out;
}

inline SeedSet SelectCmin(const std::vector<std::string> &pool, CoverageProvider &provider) {
  std::vector<SizedCoverage> files;
  for (auto &c : internal::CoverAll(pool, provider, true)) {
    files.push_back({std::move(c.path), c.size, std::move(c.coverage)});
  }
  return SelectCmin(std::move(files));
}

struct HotsetScore {
  std::string path;
  uint64_t score = 0;  // unique crashes + unique paths
};

// Top-k by score, ties by path.
inline SeedSet RankHotset(std::vector<HotsetScore> scores, size_t k) {
  if (k > scores.size()) {
    throw Error(ErrorCode::kPoolTooSmall, "hotset k exceeds pool size");
  }
  std::sort(scores.begin(), scores.end(), [](const auto &a, const auto &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.path < b.path;
  });
  SeedSet out;
  for (size_t i = 0; i < k; ++i) out.push_back(scores[i].path);
  return out;
}

struct HotsetConfig {
  uint64_t executions_per_file = 2000;
  // When set, a per-file wall-clock allowance replaces the execution budget
  // (the classic setting is 240 s); results are then timing dependent.
  std::optional<double> seconds_per_file;
  uint64_t rng_seed = 0;
};

inline std::vector<HotsetScore> ScoreHotset(const std::vector<std::string> &pool,
                                            const SyntheticTarget &target, const HotsetConfig &cfg) {
  std::vector<HotsetScore> scores;
  for (const auto &path : pool) {
    Bytes data;
    try {
      data = ReadBytes(path);
    } catch (const Error &e) {
      throw Error(ErrorCode::kTargetFailure, e.what());
    }
    CampaignConfig cc;
    cc.budget = cfg.seconds_per_file ? UINT64_MAX : std::max<uint64_t>(cfg.executions_per_file, 1);
    cc.wall_clock_seconds = cfg.seconds_per_file;
    cc.rng_seed = cfg.rng_seed;
    cc.snapshot_interval = cc.budget == UINT64_MAX ? 1'000'000 : cc.budget;
    const std::vector<Bytes> seed = {std::move(data)};
    CampaignStats s = RunCampaign(seed, target, cc);
    scores.push_back({path, s.unique_crashes() + s.unique_paths()});
  }
  return scores;
}

inline SeedSet SelectHotset(const std::vector<std::string> &pool, const SyntheticTarget &target,
                            const HotsetConfig &cfg, size_t k) {
  if (k > pool.size()) throw Error(ErrorCode::kPoolTooSmall, "hotset k exceeds pool size");
  return RankHotset(ScoreHotset(pool, target, cfg), k);
}

// Copies the selected files into out_dir, keeping their base names
// (prefixed with the selection index to keep names unique).
inline void WriteSeedSet(const SeedSet &seeds, const std::filesystem::path &out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out_dir.string());
  char prefix[16];
  for (size_t i = 0; i < seeds.size(); ++i) {
    std::snprintf(prefix, sizeof prefix, "%06zu_", i);
    const std::string name = prefix + fs::path(seeds[i]).filename().string();
    fs::copy_file(seeds[i], out_dir / name, fs::copy_options::overwrite_existing, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "copy " + seeds[i] + ": " + ec.message());
  }
}

}  // namespace seedforge

#endif  // SEEDFORGE_STRATEGIES_HPP_
