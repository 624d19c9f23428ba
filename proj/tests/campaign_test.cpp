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

#include "seedforge/campaign.hpp"

#include <gtest/gtest.h>

#include <map>

#include "test_util.hpp"

namespace seedforge {
namespace {

using testing::TempDir;

std::vector<Bytes> WellFormedSeeds(const SyntheticTarget &t, int n, uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::vector<Bytes> out;
  for (int i = 0; i < n; ++i) out.push_back(MakeWellFormedFile(t, rng));
  return out;
}

CampaignConfig Budget(uint64_t budget, uint64_t seed = 1) {
  CampaignConfig c;
  c.budget = budget;
  c.rng_seed = seed;
  c.snapshot_interval = 1000;
  return c;
}

TEST(CampaignTest, RejectsEmptySeedsAndSmallBudgets) {
  const SyntheticTarget t(1);
  EXPECT_SEEDFORGE_ERROR(RunCampaign({}, t, Budget(10)), ErrorCode::kInvalidCount);
  const auto seeds = WellFormedSeeds(t, 5, 1);
  EXPECT_SEEDFORGE_ERROR(RunCampaign(seeds, t, Budget(4)), ErrorCode::kBudgetTooSmall);
}

TEST(CampaignTest, BudgetEqualToSeedCountRunsOnlySeeds) {
  const SyntheticTarget t(1);
  const auto seeds = WellFormedSeeds(t, 8, 2);
  const CampaignStats s = RunCampaign(seeds, t, Budget(8));
  EXPECT_EQ(s.executions, 8u);
  EXPECT_EQ(s.seed_executions, 8u);
  EXPECT_EQ(s.mutation_executions, 0u);
  EXPECT_EQ(s.max_generation(), 1u);
  EXPECT_GE(s.unique_paths(), 1u);
}

TEST(CampaignTest, ExecutionCountEqualsBudget) {
  const SyntheticTarget t(2);
  const auto seeds = WellFormedSeeds(t, 10, 3);
  const CampaignStats s = RunCampaign(seeds, t, Budget(12345));
  EXPECT_EQ(s.executions, 12345u);
  EXPECT_EQ(s.seed_executions + s.mutation_executions, s.executions);
}

TEST(CampaignTest, GenerationIsParentPlusOne) {
  const SyntheticTarget t(3);
  const auto seeds = WellFormedSeeds(t, 10, 4);
  const CampaignStats s = RunCampaign(seeds, t, Budget(50000));
  std::map<uint64_t, uint32_t> gen;
  for (const auto &q : s.queue) gen[q.id] = q.generation;
  for (const auto &q : s.queue) {
    if (q.parent) {
      ASSERT_TRUE(gen.count(*q.parent));
      EXPECT_EQ(q.generation, gen[*q.parent] + 1);
    } else {
      EXPECT_EQ(q.generation, 1u);
    }
  }
  for (const auto &c : s.crashes) {
    if (c.parent) {
      EXPECT_EQ(c.generation, gen.at(*c.parent) + 1);
    }
  }
  EXPECT_GT(s.max_generation(), 1u);
}

TEST(CampaignTest, SeriesIsMonotone) {
  const SyntheticTarget t(4);
  const auto seeds = WellFormedSeeds(t, 10, 5);
  const CampaignStats s = RunCampaign(seeds, t, Budget(30000));
  ASSERT_GE(s.series.size(), 2u);
  for (size_t i = 1; i < s.series.size(); ++i) {
    EXPECT_GE(s.series[i].unique_paths, s.series[i - 1].unique_paths);
    EXPECT_GE(s.series[i].unique_crashes, s.series[i - 1].unique_crashes);
    EXPECT_GT(s.series[i].executions, s.series[i - 1].executions);
  }
  EXPECT_EQ(s.series.back().executions, s.executions);
  EXPECT_EQ(s.series.back().unique_paths, s.unique_paths());
}

TEST(CampaignTest, IsDeterministic) {
  const SyntheticTarget t(5);
  const auto seeds = WellFormedSeeds(t, 10, 6);
  const CampaignStats a = RunCampaign(seeds, t, Budget(20000, 9));
  const CampaignStats b = RunCampaign(seeds, t, Budget(20000, 9));
  EXPECT_EQ(a, b);
  EXPECT_EQ(StatsCsv(a), StatsCsv(b));
}

TEST(CampaignTest, CrashArchiveHoldsOneEntryPerRule) {
  const SyntheticTarget t(6);
  std::vector<Bytes> seeds;
  for (size_t r = 0; r < t.crash_rules().size(); ++r) seeds.push_back(t.CrashWitness(r));
  seeds.push_back(t.CrashWitness(0));
  const CampaignStats s = RunCampaign(seeds, t, Budget(5000));
  EXPECT_EQ(s.unique_crashes(), t.crash_rules().size());
  EXPECT_GE(s.unique_paths(), 1u);  // all-crash fallback queued the seeds
  for (size_t i = 0; i < s.crashes.size(); ++i) EXPECT_EQ(s.crashes[i].rule, i);
}

TEST(ReportTest, SingleSnapshotGivesOneCsvRow) {
  const SyntheticTarget t(7);
  const auto seeds = WellFormedSeeds(t, 3, 7);
  const CampaignStats s = RunCampaign(seeds, t, Budget(3));
  ASSERT_EQ(s.series.size(), 1u);
  const std::string csv = StatsCsv(s);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(ReportTest, JsonTotalsMatchFinalCsvRowAndFilesAreStable) {
  TempDir dir;
  const SyntheticTarget t(8);
  const auto seeds = WellFormedSeeds(t, 5, 8);
  const CampaignStats s = RunCampaign(seeds, t, Budget(7777));
  WriteCampaignDir(s, dir / "run", "trial");
  const auto j = nlohmann::json::parse(internal::ReadWholeFile(dir / "run" / "summary.json"));
  const StatsSnapshot &last = s.series.back();
  EXPECT_EQ(j.at("executions"), last.executions);
  EXPECT_EQ(j.at("unique_paths"), last.unique_paths);
  EXPECT_EQ(j.at("unique_crashes"), last.unique_crashes);
  EXPECT_EQ(j.at("max_generation"), last.max_generation);
  EXPECT_EQ(j.at("label"), "trial");
  const std::string csv1 = internal::ReadWholeFile(dir / "run" / "stats.csv");
  EmitReport(s, dir / "run", "trial");
  EXPECT_EQ(internal::ReadWholeFile(dir / "run" / "stats.csv"), csv1);
  size_t queued = 0;
  for (auto &e : std::filesystem::directory_iterator(dir / "run" / "queue")) {
    EXPECT_TRUE(e.path().filename().string().starts_with("id:"));
    ++queued;
  }
  EXPECT_EQ(queued, s.unique_paths());
}

TEST(ReportTest, FileNamesFollowTheAflConvention) {
  QueueEntry q;
  q.id = 12;
  q.generation = 3;
  EXPECT_EQ(QueueFileName(q), "id:000012,gen:3");
  CrashEntry c;
  c.id = 4;
  c.rule = 5;
  EXPECT_EQ(CrashFileName(c), "id:000004,rule:5");
}

}  // namespace
}  // namespace seedforge
