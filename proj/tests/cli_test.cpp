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

#include "seedforge/cli.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace seedforge {
namespace {

using testing::TempDir;
using testing::ToBytes;

struct CliRun {
  int code;
  std::string out, err;
};

CliRun Sf(std::vector<std::string> args) {
  args.insert(args.begin(), "seedforge");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

size_t CountFiles(const std::filesystem::path &dir) {
  size_t n = 0;
  for (auto &e : std::filesystem::directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

// A tiny checkpoint trained through the CLI itself.
std::filesystem::path TinyCheckpoint(const TempDir &d) {
  EXPECT_EQ(Sf({"synth", "--target", "family:2", "-n", "12", "--out-dir", (d / "wf").string()}).code, 0);
  EXPECT_EQ(Sf({"harvest", (d / "wf").string(), "--min-size", "1", "--max-size", "4608", "--rows", "32",
                 "--cols", "32", "-o", (d / "m.json").string()})
                .code,
            0);
  const CliRun r = Sf({"--rng-seed", "3", "train", "--manifest", (d / "m.json").string(), "--steps", "2",
                        "--rows", "32", "--cols", "32", "--batch-size", "4", "--latent-dim", "4",
                        "--generator-hidden", "8", "--critic-hidden", "8", "--out", (d / "c.sswg").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return d / "c.sswg";
}

TEST(CliTest, NoSubcommandIsUsageError) { EXPECT_EQ(Sf({}).code, kExitUsage); }

TEST(CliTest, UnknownFlagIsUsageError) { EXPECT_EQ(Sf({"report", "a", "b", "--bogus"}).code, kExitUsage); }

TEST(CliTest, HelpExitsZero) { EXPECT_EQ(Sf({"--help"}).code, kExitOk); }

TEST(CliTest, EncodeDecodeRoundTrip) {
  TempDir d;
  WriteBytes(d / "in", ToBytes("round trip me!"));
  ASSERT_EQ(Sf({"encode", (d / "in").string(), (d / "m.ssmx").string()}).code, 0);
  const CliRun r = Sf({"decode", (d / "m.ssmx").string(), (d / "out").string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(ReadBytes(d / "out"), ToBytes("round trip me!"));
  EXPECT_NE(r.out.find("event=decode bytes=14"), std::string::npos);
}

TEST(CliTest, EncodeHonoursCodecFlags) {
  TempDir d;
  WriteBytes(d / "in", ToBytes("ab"));
  ASSERT_EQ(Sf({"encode", (d / "in").string(), (d / "m.ssmx").string(), "--k", "2", "--rows", "3", "--cols",
                 "5"})
                .code,
            0);
  const MatrixFile f = LoadMatrix(d / "m.ssmx");
  EXPECT_EQ(f.group_size, 2);
  EXPECT_EQ(f.matrix.rows, 3);
  EXPECT_EQ(f.matrix.cols, 5);
}

TEST(CliTest, DomainErrorExitsOneWithMessage) {
  TempDir d;
  const CliRun r = Sf({"decode", (d / "missing.ssmx").string(), (d / "out").string()});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(CliTest, CapacityExceededIsDomainError) {
  TempDir d;
  WriteBytes(d / "big", Bytes(18433, 7));
  EXPECT_EQ(Sf({"encode", (d / "big").string(), (d / "m.ssmx").string()}).code, kExitDomainError);
}

TEST(CliTest, PeachsetWithoutCoverageSourceIsUsageError) {
  TempDir d;
  const CliRun r = Sf({"select", "--strategy", "peachset", "--pool", d.path().string(), "--out-dir",
                        (d / "o").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("coverage"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(CliTest, GenerateWritesRequestedFiles) {
  TempDir d;
  const auto ckpt = TinyCheckpoint(d);
  const CliRun r =
      Sf({"generate", "--ckpt", ckpt.string(), "-n", "100", "--rng-seed", "7", "--out-dir", (d / "s").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(CountFiles(d / "s"), 100u);
  ASSERT_EQ(Sf({"generate", "--ckpt", ckpt.string(), "-n", "100", "--rng-seed", "7", "--out-dir",
                 (d / "s2").string()})
                .code,
            0);
  EXPECT_EQ(ReadBytes(d / "s" / "seed_000042"), ReadBytes(d / "s2" / "seed_000042"));
  EXPECT_EQ(Sf({"generate", "--ckpt", ckpt.string(), "-n", "0", "--out-dir", (d / "s3").string()}).code,
            kExitDomainError);
}

TEST(CliTest, SelectStrategiesWriteSeedSets) {
  TempDir d;
  ASSERT_EQ(Sf({"synth", "--target", "family:4", "-n", "20", "--out-dir", (d / "pool").string()}).code, 0);
  for (const std::string strategy : {"random", "peachset", "cmin", "hotset"}) {
    const auto out = d / ("sel_" + strategy);
    CliRun r = Sf({"select", "--strategy", strategy, "--pool", (d / "pool").string(), "-n", "5", "--target",
                    "family:4", "--hotset-execs", "100", "--out-dir", out.string()});
    ASSERT_EQ(r.code, 0) << strategy << ": " << r.err;
    EXPECT_GE(CountFiles(out), 1u) << strategy;
  }
  EXPECT_EQ(CountFiles(d / "sel_random"), 5u);
}

TEST(CliTest, CoverageDumpDrivesCmin) {
  TempDir d;
  std::filesystem::create_directories(d / "pool");
  WriteBytes(d / "pool" / "a", ToBytes("a"));
  WriteBytes(d / "pool" / "b", ToBytes("bb"));
  const std::string a = (d / "pool" / "a").string(), b = (d / "pool" / "b").string();
  internal::WriteWholeFile(d / "cov.tsv", a + "\t1\n" + b + "\t1,2\n");
  ASSERT_EQ(Sf({"select", "--strategy", "cmin", "--pool", (d / "pool").string(), "--coverage-dump",
                 (d / "cov.tsv").string(), "--out-dir", (d / "o").string()})
                .code,
            0);
  EXPECT_EQ(CountFiles(d / "o"), 1u);
  EXPECT_TRUE(std::filesystem::exists(d / "o" / "000000_b"));
}

TEST(CliTest, CampaignAndReport) {
  TempDir d;
  ASSERT_EQ(Sf({"synth", "--target", "family:6", "-n", "5", "--out-dir", (d / "seeds").string()}).code, 0);
  for (const std::string run : {"r1", "r2"}) {
    const CliRun r = Sf({"--rng-seed", "5", "campaign", "--target", "family:6", "--seeds",
                          (d / "seeds").string(), "--budget", "4000", "--out", (d / run).string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("executions=4000"), std::string::npos);
  }
  EXPECT_EQ(internal::ReadWholeFile(d / "r1" / "stats.csv"), internal::ReadWholeFile(d / "r2" / "stats.csv"));
  const CliRun r = Sf({"report", (d / "r1").string(), (d / "r2").string(), "--csv", (d / "t.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max_generation"), std::string::npos);
  EXPECT_NE(r.out.find("average"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(d / "t.csv"));
  EXPECT_EQ(Sf({"report", (d / "r1").string(), d.path().string()}).code, kExitDomainError);
}

TEST(CliTest, QuietSuppressesProgress) {
  TempDir d;
  WriteBytes(d / "in", ToBytes("x"));
  const CliRun r = Sf({"--quiet", "encode", (d / "in").string(), (d / "m.ssmx").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliTest, JsonAndTomlConfigsSupplyFlagsAndFlagsWin) {
  TempDir d;
  ASSERT_EQ(Sf({"synth", "--target", "family:8", "-n", "3", "--out-dir", (d / "seeds").string()}).code, 0);
  internal::WriteWholeFile(d / "c.json", R"({"rng-seed": 9, "campaign": {"budget": 1500, "target": "family:8"}})");
  CliRun r = Sf({"--config", (d / "c.json").string(), "campaign", "--seeds", (d / "seeds").string(), "--out",
                  (d / "j").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("executions=1500"), std::string::npos);
  internal::WriteWholeFile(d / "c.toml", "rng-seed = 9\n[campaign]\nbudget = 1500\ntarget = \"family:8\"\n");
  r = Sf({"--config", (d / "c.toml").string(), "campaign", "--seeds", (d / "seeds").string(), "--budget", "900",
           "--out", (d / "t").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("executions=900"), std::string::npos);
  const auto j = nlohmann::json::parse(internal::ReadWholeFile(d / "j" / "summary.json"));
  EXPECT_EQ(j.at("rng_seed"), 9);
}

TEST(CliTest, TrainResumeContinuesTheStepCounter) {
  TempDir d;
  const auto ckpt = TinyCheckpoint(d);
  const CliRun r = Sf({"train", "--manifest", (d / "m.json").string(), "--steps", "1", "--resume",
                        ckpt.string(), "--batch-size", "4", "--out", (d / "c2.sswg").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(LoadCheckpoint(d / "c2.sswg").step, 3u);
}

}  // namespace
}  // namespace seedforge
