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

// Deterministic coverage-guided campaign over a synthetic target.
//
// Seeds run first with generation 1. Afterwards the queue is scheduled
// round-robin; each pick receives `energy` single-operator mutations. A
// non-crashing input whose edge-set digest is new joins the queue (a unique
// path); a crashing input whose rule id is new is archived (a unique crash).
// Children always carry their parent's generation + 1.

#ifndef SEEDFORGE_CAMPAIGN_HPP_
#define SEEDFORGE_CAMPAIGN_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/coverage.hpp"
#include "seedforge/error.hpp"
#include "seedforge/mutator.hpp"
#include "seedforge/rng.hpp"
#include "seedforge/target.hpp"

namespace seedforge {

struct QueueEntry {
  uint64_t id = 0;
  Bytes input;
  uint32_t generation = 1;
  std::optional<uint64_t> parent;  // queue id; none for seeds
  uint64_t coverage_digest = 0;

  bool operator==(const QueueEntry &) const = default;
};

struct CrashEntry {
  uint64_t id = 0;
  Bytes input;
  uint32_t generation = 1;
  std::optional<uint64_t> parent;
  uint32_t rule = 0;

  bool operator==(const CrashEntry &) const = default;
};

struct StatsSnapshot {
  uint64_t elapsed = 0;  // executions, or milliseconds in wall-clock mode
  uint64_t executions = 0;
  uint64_t unique_crashes = 0;
  uint64_t unique_paths = 0;
  uint64_t max_generation = 0;

  bool operator==(const StatsSnapshot &) const = default;
};

struct CampaignConfig {
  uint64_t budget = 2'000'000;  // executions
  uint64_t rng_seed = 0;
  uint64_t snapshot_interval = 10'000;
  int energy = 64;
  size_t max_input = kDefaultMaxInput;
  // Stop after this much wall-clock time instead (budget still caps).
  std::optional<double> wall_clock_seconds;
};

struct CampaignStats {
  std::string target;
  uint64_t rng_seed = 0;
  uint64_t budget = 0;
  uint64_t seed_count = 0;
  uint64_t executions = 0;
  uint64_t seed_executions = 0;
  uint64_t mutation_executions = 0;
  std::vector<StatsSnapshot> series;
  std::vector<QueueEntry> queue;
  std::vector<CrashEntry> crashes;

  uint64_t unique_paths() const { return queue.size(); }
  uint64_t unique_crashes() const { return crashes.size(); }
  uint64_t max_generation() const {
    uint64_t g = 0;
    for (const auto &q : queue) g = std::max<uint64_t>(g, q.generation);
    for (const auto &c : crashes) g = std::max<uint64_t>(g, c.generation);
    return g;
  }

  bool operator==(const CampaignStats &) const = default;
};

inline CampaignStats RunCampaign(std::span<const Bytes> seeds, const SyntheticTarget &target,
                                 const CampaignConfig &cfg) {
  if (seeds.empty()) throw Error(ErrorCode::kInvalidCount, "campaign needs at least one seed");
  if (cfg.budget < seeds.size()) {
    throw Error(ErrorCode::kBudgetTooSmall, "budget " + std::to_string(cfg.budget) + " < " +
                                                std::to_string(seeds.size()) + " seeds");
  }
  if (cfg.energy < 1 || cfg.snapshot_interval < 1) {
    throw Error(ErrorCode::kInvalidArgument, "energy and snapshot interval must be >= 1");
  }

  CampaignStats stats;
  stats.target = target.spec();
  stats.rng_seed = cfg.rng_seed;
  stats.budget = cfg.budget;
  stats.seed_count = seeds.size();

  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start)
                                     .count());
  };
  std::unordered_set<uint64_t> seen_paths;
  std::vector<bool> seen_rules;
  uint64_t max_gen = 0;
  uint64_t next_crash_id = 0;

  auto snapshot = [&] {
    stats.series.push_back({cfg.wall_clock_seconds ? elapsed_ms() : stats.executions,
                            stats.executions, stats.crashes.size(), stats.queue.size(), max_gen});
  };
  // Executes one input, archives it if novel and returns its path digest.
  auto execute = [&](Bytes input, uint32_t generation, std::optional<uint64_t> parent) {
    if (input.size() > cfg.max_input) input.resize(cfg.max_input);
    ExecResult r = target.Run(input);
    ++stats.executions;
    const uint64_t digest = UniquePathId(r.coverage);
    if (r.crashed()) {
      if (r.crash_id >= seen_rules.size()) seen_rules.resize(r.crash_id + 1, false);
      if (!seen_rules[r.crash_id]) {
        seen_rules[r.crash_id] = true;
        stats.crashes.push_back({next_crash_id++, std::move(input), generation, parent, r.crash_id});
        max_gen = std::max<uint64_t>(max_gen, generation);
      }
    } else {
      if (seen_paths.insert(digest).second) {
        stats.queue.push_back({stats.queue.size(), std::move(input), generation, parent, digest});
        max_gen = std::max<uint64_t>(max_gen, generation);
      }
    }
    if (stats.executions % cfg.snapshot_interval == 0) snapshot();
    return digest;
  };

  std::vector<uint64_t> seed_digests;
  for (const Bytes &s : seeds) seed_digests.push_back(execute(s, 1, std::nullopt));
  stats.seed_executions = stats.executions;

  // Every seed crashed: mutate from the seeds themselves so the campaign
  // can still make progress.
  if (stats.queue.empty()) {
    for (size_t i = 0; i < seeds.size(); ++i) {
      Bytes input = seeds[i];
      if (input.size() > cfg.max_input) input.resize(cfg.max_input);
      if (seen_paths.insert(seed_digests[i]).second) {
        stats.queue.push_back({stats.queue.size(), std::move(input), 1, std::nullopt, seed_digests[i]});
      }
    }
    max_gen = std::max<uint64_t>(max_gen, 1);
  }

  Rng rng = MakeRng(DeriveSeed(cfg.rng_seed, 0xf022));
  size_t cursor = 0;
  bool out_of_time = false;
  while (stats.executions < cfg.budget && !out_of_time) {
    const size_t pick = cursor++ % stats.queue.size();
    const Bytes parent = stats.queue[pick].input;
    const uint32_t parent_gen = stats.queue[pick].generation;
    const uint64_t parent_id = stats.queue[pick].id;
    for (int e = 0; e < cfg.energy && stats.executions < cfg.budget; ++e) {
      Bytes child = Mutate(
          parent, stats.queue.size(),
          [&](size_t i) { return std::span<const uint8_t>(stats.queue[i].input); }, rng,
          cfg.max_input);
      execute(std::move(child), parent_gen + 1, parent_id);
      ++stats.mutation_executions;
      if (cfg.wall_clock_seconds && (stats.executions & 255) == 0 &&
          static_cast<double>(elapsed_ms()) >= *cfg.wall_clock_seconds * 1000.0) {
        out_of_time = true;
        break;
      }
    }
  }
  if (stats.series.empty() || stats.series.back().executions != stats.executions) snapshot();
  return stats;
}

inline std::string StatsCsv(const CampaignStats &stats) {
  std::string out = "elapsed,executions,unique_crashes,unique_paths,max_generation\n";
  char line[160];
  for (const auto &s : stats.series) {
    std::snprintf(line, sizeof line, "%llu,%llu,%llu,%llu,%llu\n",
                  static_cast<unsigned long long>(s.elapsed),
                  static_cast<unsigned long long>(s.executions),
                  static_cast<unsigned long long>(s.unique_crashes),
                  static_cast<unsigned long long>(s.unique_paths),
                  static_cast<unsigned long long>(s.max_generation));
    out += line;
  }
  return out;
}

inline nlohmann::json SummaryJson(const CampaignStats &stats, const std::string &label) {
  return {{"label", label},
          {"target", stats.target},
          {"rng_seed", stats.rng_seed},
          {"budget", stats.budget},
          {"seeds", stats.seed_count},
          {"executions", stats.executions},
          {"seed_executions", stats.seed_executions},
          {"mutation_executions", stats.mutation_executions},
          {"unique_crashes", stats.unique_crashes()},
          {"unique_paths", stats.unique_paths()},
          {"max_generation", stats.max_generation()}};
}

// Writes stats.csv and summary.json into `dir`.
inline void EmitReport(const CampaignStats &stats, const std::filesystem::path &dir,
                       const std::string &label = "") {
  if (stats.series.empty()) throw Error(ErrorCode::kInvalidArgument, "no snapshots to report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
  internal::WriteWholeFile(dir / "stats.csv", StatsCsv(stats));
  internal::WriteWholeFile(dir / "summary.json", SummaryJson(stats, label).dump(2) + "\n");
}

inline std::string QueueFileName(const QueueEntry &q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "id:%06llu,gen:%u", static_cast<unsigned long long>(q.id), q.generation);
  return buf;
}

inline std::string CrashFileName(const CrashEntry &c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "id:%06llu,rule:%u", static_cast<unsigned long long>(c.id), c.rule);
  return buf;
}

// AFL-like output tree: queue/, crashes/, stats.csv, summary.json.
inline void WriteCampaignDir(const CampaignStats &stats, const std::filesystem::path &dir,
                             const std::string &label = "") {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir / "queue", ec);
  fs::create_directories(dir / "crashes", ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
  for (const auto &q : stats.queue) WriteBytes(dir / "queue" / QueueFileName(q), q.input);
  for (const auto &c : stats.crashes) WriteBytes(dir / "crashes" / CrashFileName(c), c.input);
  EmitReport(stats, dir, label);
}

}  // namespace seedforge

#endif  // SEEDFORGE_CAMPAIGN_HPP_
