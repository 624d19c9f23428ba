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

// Acceptance suite. One PASS/FAIL line per criterion; indented lines are
// supporting measurements. Exit status is nonzero when any criterion fails.
//
// Usage: acceptance [criterion-number...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "../gradient_check.hpp"
#include "../strategy_oracle.hpp"
#include "seedforge/seedforge.hpp"

namespace seedforge {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

class ScratchDir {
 public:
  explicit ScratchDir(const std::string &tag)
      : path_(fs::temp_directory_path() / ("seedforge_accept_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;
  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

std::string Fmt(const char *fmt, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

Bytes RandomFile(Rng &rng, size_t n) {
  Bytes out(n);
  for (auto &b : out) b = static_cast<uint8_t>(rng());
  return out;
}

std::vector<int> Digits(uint64_t v, int k) {
  std::vector<int> codes(k);
  for (int i = k - 1; i >= 0; --i) {
    codes[i] = static_cast<int>(v % kAlphabetSize);
    v /= kAlphabetSize;
  }
  return codes;
}

// 1. Byte-exact codec round trip plus boundary packs, under 10 s.
Verdict CodecRoundTrip() {
  const auto t0 = Clock::now();
  const CodecConfig cfg;
  Rng rng = MakeRng(0xc0dec);
  size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    size_t n = 0;
    do {
      n = 1 + UniformBelow(rng, cfg.byte_capacity());
    } while (n % 3 == 0);
    const Bytes f = RandomFile(rng, n);
    if (DecodeMatrix(EncodeBytes(f, cfg), cfg) != f) ++failures;
  }
  const uint64_t top = cfg.max_group_value();
  const bool low = UnpackGroupValue(PackGroup(Digits(0, cfg.group_size), cfg), cfg) == 0;
  const bool high = UnpackGroupValue(PackGroup(Digits(top, cfg.group_size), cfg), cfg) == top;
  const double secs = SecondsSince(t0);
  std::ostringstream os;
  os << 1000 - failures << "/1000 files exact, boundary packs " << (low && high ? "exact" : "MISMATCH")
     << Fmt(", %.2f s (limit 10 s)", secs);
  return {failures == 0 && low && high && secs < 10.0, os.str()};
}

// 2. Endpoint constant to full precision and 10^6 pack/unpack identities.
Verdict NormalizationEndpoint() {
  const CodecConfig cfg;
  const double end = PackGroup(std::vector<int>(cfg.group_size, 64), cfg);
  Rng rng = MakeRng(0xe4d);
  const uint64_t span = cfg.max_group_value() + 1;
  size_t failures = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const uint64_t v = UniformBelow(rng, span);
    if (UnpackGroupValue(PackGroup(Digits(v, cfg.group_size), cfg), cfg) != v) ++failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "pack([64]x6) = %.17g (want 0.75418890624), %zu/1000000 mismatches", end,
                failures);
  return {end == 0.75418890624 && failures == 0, buf};
}

// 3. Analytic vs central-difference gradients on random small nets.
Verdict GradientCheck() {
  const auto t0 = Clock::now();
  Rng rng = MakeRng(0x9cad);
  double worst = 0;
  size_t probes = 0;
  const int nets = 40;
  for (int i = 0; i < nets; ++i) {
    Eigen::Index width = 0;
    const MlpParams net = testing::RandomSmallMlp(rng, width);
    const auto r = testing::CheckGradients(net, width, rng);
    worst = std::max(worst, r.max_relative_error);
    probes += r.checked;
  }
  const double secs = SecondsSince(t0);
  return {worst < 1e-4 && secs < 30.0,
          Fmt("%.0f nets, %.0f probes, max relative error %.3g (limit 1e-4), %.2f s (limit 30 s)", nets,
              static_cast<double>(probes), worst, secs)};
}

bool CriticWithinClip(const WganState &s) {
  for (const auto &l : s.critic.layers) {
    if (l.weight.cwiseAbs().maxCoeff() > s.clip_bound) return false;
    if (l.bias.size() && l.bias.cwiseAbs().maxCoeff() > s.clip_bound) return false;
  }
  return true;
}

// 4. Clip invariant, toy surrogate growth, bit-identical reruns.
Verdict WganMechanics() {
  CodecConfig codec;
  codec.rows = codec.cols = 4;
  Rng rng = MakeRng(0x70c);
  TrainingBatch toy;
  for (int i = 0; i < 100; ++i) {
    toy.matrices.push_back(EncodeBytes(RandomFile(rng, 1 + UniformBelow(rng, codec.byte_capacity())), codec));
  }
  TrainConfig cfg;
  cfg.total_steps = 40;
  cfg.batch_size = 16;
  cfg.latent_dim = 8;
  cfg.generator_hidden = {16, 32};
  cfg.critic_hidden = {32, 16};
  const WganTrainer trainer(toy, cfg);

  auto run = [&](bool check_clip, int &violations) {
    WganState s = MakeWganState(cfg, codec, 41);
    for (uint64_t i = 0; i < cfg.total_steps; ++i) {
      trainer.Step(s);
      if (check_clip && !CriticWithinClip(s)) ++violations;
    }
    return SerializeCheckpoint(s);
  };
  int violations = 0;
  const std::string first = run(true, violations);
  int unused = 0;
  const bool identical = first == run(false, unused);

  CodecConfig one;
  one.rows = one.cols = 1;
  TrainConfig toy_cfg;
  toy_cfg.total_steps = 200;
  toy_cfg.critic_hidden = {8};
  toy_cfg.generator_hidden = {4};
  toy_cfg.latent_dim = 2;
  WganState s = MakeWganState(toy_cfg, one, 15);
  const Eigen::MatrixXd real = Eigen::MatrixXd::Constant(1, 64, 0.7);
  const Eigen::MatrixXd fake = Eigen::MatrixXd::Constant(1, 64, 0.2);
  double prev = CriticUpdate(s, real, fake, LrSchedule(0, toy_cfg), toy_cfg.adam);
  int increasing = 0;
  for (uint64_t step = 1; step < 200; ++step) {
    const double cur = CriticUpdate(s, real, fake, LrSchedule(step, toy_cfg), toy_cfg.adam);
    if (cur > prev && increasing == static_cast<int>(step) - 1) ++increasing;
    prev = cur;
  }
  std::ostringstream os;
  os << cfg.total_steps << " steps on 100 files with " << violations << " clip violations; surrogate rose "
     << increasing << " consecutive critic steps (need 100); reruns " << (identical ? "bit-identical" : "DIFFER");
  return {violations == 0 && increasing >= 100 && identical, os.str()};
}

// 5. Sampling cost grows at most linearly and n=100 fits in 60 s.
Verdict GenerationScaling() {
  const TrainConfig cfg;
  const WganState s = MakeWganState(cfg, CodecConfig{}, 5);
  auto timed = [&](int64_t n) {
    const auto t0 = Clock::now();
    const auto files = SampleSeedFiles(s, n, 6);
    if (static_cast<int64_t>(files.size()) != n) return -1.0;
    return SecondsSince(t0);
  };
  timed(10);  // warm caches
  const double t100 = timed(100);
  const double t2000 = timed(2000);
  const double ratio = t2000 / t100;
  return {t100 >= 0 && t2000 >= 0 && ratio <= 25.0 && t100 < 60.0,
          Fmt("n=100 %.3f s (limit 60 s), n=2000 %.3f s, ratio %.2f (limit 25)", t100, t2000, ratio)};
}

// 6. Union preservation, cmin irredundancy and optimality gap on 200 pools.
Verdict StrategyOracles() {
  const auto t0 = Clock::now();
  Rng rng = MakeRng(0x5e7);
  size_t union_failures = 0, redundant = 0, singleton_misses = 0, singletons = 0, gap_sum = 0, gap_max = 0;
  size_t optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const testing::RandomPool pool = testing::MakeRandomPool(rng);
    DumpCoverageProvider provider(pool.coverage);
    const SeedSet peach = SelectPeachset(pool.paths, provider);
    const SeedSet cmin = SelectCmin(pool.sized);
    const CoverageMap all = testing::UnionOfAll(pool);
    if (testing::UnionOf(pool, peach) != all || testing::UnionOf(pool, cmin) != all) ++union_failures;
    if (!testing::Irredundant(pool, cmin)) ++redundant;
    const size_t opt = testing::OptimalCoverSize(pool);
    const size_t gap = cmin.size() >= opt ? cmin.size() - opt : 0;
    if (cmin.size() < opt) ++union_failures;  // smaller than optimal cannot cover
    gap_sum += gap;
    gap_max = std::max(gap_max, gap);
    optimal += gap == 0;
    if (opt == 1) {
      ++singletons;
      if (cmin.size() != 1) ++singleton_misses;
    }
  }
  const double secs = SecondsSince(t0);
  std::ostringstream os;
  os << "union failures " << union_failures << ", redundant cmin " << redundant << ", cmin optimal in "
     << optimal << "/200 (mean gap " << static_cast<double>(gap_sum) / 200.0 << ", max gap " << gap_max
     << "), singleton optima " << singletons << " with " << singleton_misses << " misses, "
     << Fmt("%.2f s (limit 60 s)", secs);
  return {union_failures == 0 && redundant == 0 && singleton_misses == 0 && secs < 60.0, os.str()};
}

std::vector<Bytes> WellFormedSeeds(const SyntheticTarget &t, uint64_t seed, int n) {
  Rng rng = MakeRng(seed);
  std::vector<Bytes> out;
  for (int i = 0; i < n; ++i) out.push_back(MakeWellFormedFile(t, rng));
  return out;
}

// Every archived entry's generation is its parent's plus one.
bool GenerationsSound(const CampaignStats &st) {
  std::unordered_map<uint64_t, uint32_t> gen;
  for (const auto &q : st.queue) gen[q.id] = q.generation;
  auto ok = [&](uint32_t g, const std::optional<uint64_t> &parent) {
    if (!parent) return g == 1;
    auto it = gen.find(*parent);
    return it != gen.end() && g == it->second + 1;
  };
  for (const auto &q : st.queue)
    if (!ok(q.generation, q.parent)) return false;
  for (const auto &c : st.crashes)
    if (!ok(c.generation, c.parent)) return false;
  return true;
}

// 7. Determinism and accounting at a 200,000-execution budget.
Verdict CampaignDeterminism() {
  const SyntheticTarget target(12);
  const auto seeds = WellFormedSeeds(target, 0xde7, 20);
  CampaignConfig cfg;
  cfg.budget = 200'000;
  cfg.rng_seed = 77;
  const CampaignStats a = RunCampaign(seeds, target, cfg);
  const CampaignStats b = RunCampaign(seeds, target, cfg);
  const bool same_csv = StatsCsv(a) == StatsCsv(b);
  const bool accounted = a.executions == cfg.budget && a.series.back().executions == cfg.budget &&
                         a.seed_executions + a.mutation_executions == a.executions;
  const bool generations = GenerationsSound(a);
  std::ostringstream os;
  os << "stats.csv " << (same_csv ? "bit-identical" : "DIFFERS") << ", executions " << a.executions << " of "
     << cfg.budget << ", generation chains " << (generations ? "sound" : "BROKEN") << " over "
     << a.queue.size() << " paths and " << a.crashes.size() << " crashes";
  return {same_csv && accounted && generations, os.str()};
}

template <typename T>
T Median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// 8. Generated seeds vs random well-formed seeds on a held-out family.
Verdict DirectionalClaim() {
  const auto t0 = Clock::now();
  ScratchDir scratch("directional");
  const uint64_t family_a = 20, family_b = 21;  // one dialect, distinct crash rules
  const SyntheticTarget target_a(family_a), target_b(family_b);

  CodecConfig codec;
  codec.group_size = 1;
  codec.rows = codec.cols = 32;
  const SizeWindow window{64, codec.byte_capacity()};

  std::vector<fs::path> runs;
  for (uint64_t c = 0; c < 2; ++c) {
    CampaignConfig cc;
    cc.budget = 200'000;
    cc.rng_seed = DeriveSeed(0xa, c);
    cc.snapshot_interval = 50'000;
    const auto st = RunCampaign(WellFormedSeeds(target_a, DeriveSeed(0xa5, c), 100), target_a, cc);
    runs.push_back(scratch.path() / ("train_run" + std::to_string(c)));
    WriteCampaignDir(st, runs.back());
  }
  const CorpusManifest manifest = Harvest(runs, window, codec);
  std::vector<size_t> pick(manifest.entries.size());
  for (size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  Rng pick_rng = MakeRng(0x91c);
  std::shuffle(pick.begin(), pick.end(), pick_rng);
  pick.resize(std::min<size_t>(pick.size(), 8000));
  std::sort(pick.begin(), pick.end());
  const TrainingBatch data = LoadTrainingBatch(manifest, pick, codec);
  std::cout << "    harvested " << manifest.entries.size() << " valuable files, training on " << pick.size()
            << Fmt(" (%.1f s)\n", SecondsSince(t0));

  TrainConfig tc;
  tc.total_steps = 2000;
  tc.latent_dim = 32;
  tc.generator_hidden = {128, 256};
  tc.critic_hidden = {256, 128};
  tc.lr_end = 0.5e-4;
  WganState state = MakeWganState(tc, codec, 0x5eed);
  const auto t_train = Clock::now();
  WganTrainer(data, tc).Train(state, tc.total_steps);
  std::cout << Fmt("    trained %.0f steps in %.1f s\n", static_cast<double>(tc.total_steps), SecondsSince(t_train));

  const std::vector<Bytes> generated = SampleSeedFiles(state, 100, 0x9e4);
  const fs::path pool_dir = scratch.path() / "well_formed";
  fs::create_directories(pool_dir);
  {
    Rng rng = MakeRng(0xb0b);
    char name[32];
    for (int i = 0; i < 1000; ++i) {
      std::snprintf(name, sizeof name, "wf_%04d", i);
      WriteBytes(pool_dir / name, MakeWellFormedFile(target_b, rng));
    }
  }
  const auto pool = ListPool(pool_dir);
  const uint32_t magic_ok = target_b.EdgeId(EdgeKind::kMagicOk);
  size_t parsed = 0;
  for (const auto &g : generated) parsed += target_b.Run(g).coverage.Contains(magic_ok);
  std::cout << "    generated seeds passing the magic check on B: " << parsed << "/100\n";

  std::vector<uint64_t> gen_paths, gen_crashes, rnd_paths, rnd_crashes;
  for (uint64_t trial = 0; trial < 5; ++trial) {
    std::vector<Bytes> random_seeds;
    for (const auto &p : SelectRandom(pool, 100, DeriveSeed(0x7a, trial))) random_seeds.push_back(ReadBytes(p));
    CampaignConfig cc;
    cc.budget = 2'000'000;
    cc.rng_seed = DeriveSeed(0xca, trial);
    cc.snapshot_interval = 500'000;
    const auto g = RunCampaign(generated, target_b, cc);
    const auto r = RunCampaign(random_seeds, target_b, cc);
    gen_paths.push_back(g.unique_paths());
    gen_crashes.push_back(g.unique_crashes());
    rnd_paths.push_back(r.unique_paths());
    rnd_crashes.push_back(r.unique_crashes());
    std::cout << "    trial " << trial << ": generated paths " << g.unique_paths() << " crashes " << g.unique_crashes()
              << " | random paths " << r.unique_paths() << " crashes " << r.unique_crashes() << "\n";
  }
  const auto gp = Median(gen_paths), gc = Median(gen_crashes), rp = Median(rnd_paths), rc = Median(rnd_crashes);
  const double secs = SecondsSince(t0);
  std::ostringstream os;
  os << "median paths generated " << gp << " vs random " << rp << ", median crashes generated " << gc
     << " vs random " << rc << Fmt(", %.0f s (target 1800 s)", secs);
  return {gp > rp && gc >= rc, os.str()};
}

// 9. Report table carries executions and max generation with consistent totals.
Verdict ReportShape() {
  ScratchDir scratch("report");
  const SyntheticTarget target(30);
  std::vector<fs::path> dirs;
  std::vector<CampaignStats> stats;
  for (uint64_t i = 0; i < 3; ++i) {
    CampaignConfig cc;
    cc.budget = 20'000 + 10'000 * i;
    cc.rng_seed = i;
    stats.push_back(RunCampaign(WellFormedSeeds(target, 0x9e + i, 10), target, cc));
    dirs.push_back(scratch.path() / ("run" + std::to_string(i)));
    WriteCampaignDir(stats.back(), dirs.back(), "run" + std::to_string(i));
  }
  const ComparisonTable table = Compare(dirs);
  const std::string csv = ComparisonCsv(table);
  const std::string header = csv.substr(0, csv.find('\n'));
  const bool columns = header.find("executions") != std::string::npos &&
                       header.find("max_generation") != std::string::npos;
  bool rows_match = table.rows.size() == stats.size();
  double exec_sum = 0, gen_sum = 0, crash_sum = 0, path_sum = 0;
  for (size_t i = 0; rows_match && i < stats.size(); ++i) {
    const auto &row = table.rows[i];
    const auto &last = stats[i].series.back();
    rows_match = row.executions == static_cast<double>(last.executions) &&
                 row.max_generation == static_cast<double>(last.max_generation) &&
                 row.unique_paths == static_cast<double>(last.unique_paths) &&
                 row.unique_crashes == static_cast<double>(last.unique_crashes);
    exec_sum += row.executions;
    gen_sum += row.max_generation;
    crash_sum += row.unique_crashes;
    path_sum += row.unique_paths;
  }
  const bool totals = table.total.executions == exec_sum && table.total.max_generation == gen_sum &&
                      table.total.unique_crashes == crash_sum && table.total.unique_paths == path_sum &&
                      csv.find("\ntotal,") != std::string::npos;
  std::ostringstream os;
  os << "header [" << header << "], rows " << (rows_match ? "match" : "DIFFER") << " final snapshots, totals "
     << (totals ? "consistent" : "INCONSISTENT");
  return {columns && rows_match && totals, os.str()};
}

struct Criterion {
  int number;
  const char *name;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace seedforge

int main(int argc, char **argv) {
  using namespace seedforge;
  const std::vector<Criterion> all = {
      {1, "codec-round-trip", CodecRoundTrip},
      {2, "normalization-endpoint", NormalizationEndpoint},
      {3, "gradient-check", GradientCheck},
      {4, "wgan-mechanics", WganMechanics},
      {5, "generation-scaling", GenerationScaling},
      {6, "strategy-oracles", StrategyOracles},
      {7, "campaign-determinism", CampaignDeterminism},
      {8, "directional-seed-claim", DirectionalClaim},
      {9, "report-shape", ReportShape},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto &c : all) {
    if (!wanted.empty() && !wanted.count(c.number)) continue;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.number << "] " << c.name << ": " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
