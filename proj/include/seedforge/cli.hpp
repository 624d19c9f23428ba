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

// The seedforge command line. Every subcommand is a thin adapter over the
// library; progress lines are key=value pairs.

#ifndef SEEDFORGE_CLI_HPP_
#define SEEDFORGE_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seedforge/campaign.hpp"
#include "seedforge/checkpoint.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/corpus.hpp"
#include "seedforge/error.hpp"
#include "seedforge/report.hpp"
#include "seedforge/strategies.hpp"
#include "seedforge/target.hpp"
#include "seedforge/wgan.hpp"

namespace seedforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

namespace internal {

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<Eigen::Index> ParseWidths(const std::string &text) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      const long v = std::stol(tok);
      if (v < 1) throw std::invalid_argument("width");
      out.push_back(v);
    } catch (const std::exception &) {
      throw UsageError("bad layer width '" + tok + "'");
    }
  }
  return out;
}

inline void EnsureDir(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
}

inline std::vector<Bytes> ReadSeedDir(const std::filesystem::path &dir) {
  std::vector<Bytes> seeds;
  for (const auto &p : ListPool(dir)) seeds.push_back(ReadBytes(p));
  return seeds;
}

inline void WriteNumbered(const std::vector<Bytes> &files, const std::filesystem::path &dir,
                   const std::string &stem) {
  EnsureDir(dir);
  char name[64];
  for (size_t i = 0; i < files.size(); ++i) {
    std::snprintf(name, sizeof name, "%s%06zu", stem.c_str(), i);
    WriteBytes(dir / name, files[i]);
  }
}

// Config files: a JSON object (nested objects name subcommands) or TOML.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream toml(text);
      return CLI::ConfigTOML::from_config(toml);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
      throw CLI::ConversionError("config", e.what());
    }
    std::vector<CLI::ConfigItem> items;
    Flatten(j, {}, items);
    return items;
  }

 private:
  static std::string Scalar(const nlohmann::json &v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void Flatten(const nlohmann::json &obj, const std::vector<std::string> &parents,
                      std::vector<CLI::ConfigItem> &items) {
    for (const auto &[key, value] : obj.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        // Section marker so CLI11 activates the subcommand.
        items.push_back({next, "++", {}});
        Flatten(value, next, items);
        items.push_back({next, "--", {}});
        continue;
      }
      CLI::ConfigItem item{parents, key, {}};
      if (value.is_array()) {
        for (const auto &v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

}  // namespace internal

class Cli {
 public:
  Cli(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

  int Run(int argc, const char *const *argv) {
    CLI::App app{"seedforge: learned seed generation and seed-selection baselines for fuzzing",
                 "seedforge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<internal::JsonOrTomlConfig>());
    app.set_config("--config", "", "TOML or JSON file supplying flag values (flags win)");
    app.add_option("--rng-seed", rng_seed_, "Seed for every stochastic step")->capture_default_str();
    app.add_flag("--quiet", quiet_, "Suppress progress lines");

    CodecFlags codec_flags;
    auto *encode = app.add_subcommand("encode", "Convert a file into an SSMX matrix");
    std::string in_path, out_path;
    encode->add_option("in", in_path)->required();
    encode->add_option("out", out_path)->required();
    AddCodecFlags(encode, codec_flags);

    auto *decode = app.add_subcommand("decode", "Convert an SSMX matrix back into a file");
    decode->add_option("in", in_path)->required();
    decode->add_option("out", out_path)->required();
    AddCodecFlags(decode, codec_flags);

    auto *harvest = app.add_subcommand("harvest", "Collect valuable files from fuzzer output dirs");
    std::vector<std::string> dirs;
    uint64_t min_size = 12288, max_size = 17408;
    harvest->add_option("dirs", dirs)->required();
    harvest->add_option("--min-size", min_size)->capture_default_str();
    harvest->add_option("--max-size", max_size)->capture_default_str();
    harvest->add_option("-o,--output", out_path)->required();
    AddCodecFlags(harvest, codec_flags);

    auto *train = app.add_subcommand("train", "Train the WGAN on a harvested manifest");
    TrainFlags tf;
    train->add_option("--manifest", tf.manifest)->required();
    train->add_option("--steps", tf.steps)->required()->check(CLI::PositiveNumber);
    train->add_option("--out", tf.out)->required();
    train->add_option("--resume", tf.resume, "Continue from a checkpoint");
    train->add_option("--total-steps", tf.total_steps, "Learning-rate schedule length (default: --steps)");
    train->add_option("--batch-size", tf.cfg.batch_size)->capture_default_str();
    train->add_option("--n-critic", tf.cfg.n_critic)->capture_default_str();
    train->add_option("--clip", tf.cfg.clip_bound)->capture_default_str();
    train->add_option("--lr-start", tf.cfg.lr_start)->capture_default_str();
    train->add_option("--lr-end", tf.cfg.lr_end)->capture_default_str();
    train->add_option("--latent-dim", tf.cfg.latent_dim)->capture_default_str();
    train->add_option("--generator-hidden", tf.gen_hidden, "Comma-separated widths")->capture_default_str();
    train->add_option("--critic-hidden", tf.critic_hidden, "Comma-separated widths")->capture_default_str();
    train->add_option("--log-every", tf.log_every)->capture_default_str();
    AddCodecFlags(train, codec_flags);

    auto *generate = app.add_subcommand("generate", "Sample seed files from a checkpoint");
    std::string ckpt, out_dir;
    int64_t count = 100;
    generate->add_option("--ckpt", ckpt)->required();
    generate->add_option("-n", count)->capture_default_str();
    generate->add_option("--out-dir", out_dir)->required();

    auto *select = app.add_subcommand("select", "Build a seed set with a baseline strategy");
    SelectFlags sf;
    select->add_option("--strategy", sf.strategy)
        ->required()
        ->check(CLI::IsMember({"random", "afl-result", "peachset", "hotset", "cmin"}));
    select->add_option("--pool", sf.pools, "Pool dir (fuzzer output dirs for afl-result)")->required();
    select->add_option("-n", sf.n)->capture_default_str();
    select->add_option("--coverage-dump", sf.coverage_dump);
    select->add_option("--target", sf.target);
    select->add_option("--hotset-execs", sf.hotset_execs)->capture_default_str();
    select->add_option("--hotset-seconds", sf.hotset_seconds, "Wall-clock seconds per file instead of an execution budget");
    select->add_option("--out-dir", sf.out_dir)->required();

    auto *campaign = app.add_subcommand("campaign", "Fuzz a synthetic target from a seed dir");
    CampaignFlags cf;
    campaign->add_option("--target", cf.target)->required();
    campaign->add_option("--seeds", cf.seeds)->required();
    campaign->add_option("--budget", cf.cfg.budget)->capture_default_str();
    campaign->add_option("--interval", cf.cfg.snapshot_interval)->capture_default_str();
    campaign->add_option("--energy", cf.cfg.energy)->capture_default_str();
    campaign->add_option("--wall-clock-seconds", cf.wall_clock);
    campaign->add_option("--label", cf.label);
    campaign->add_option("--out", cf.out)->required();

    auto *report = app.add_subcommand("report", "Merge campaign summaries into a comparison table");
    std::string csv_out;
    report->add_option("dirs", dirs)->required();
    report->add_option("--csv", csv_out, "Also write the table as CSV");

    auto *synth = app.add_subcommand("synth", "Write well-formed files of a synthetic target's format");
    std::string target_spec;
    synth->add_option("--target", target_spec)->required();
    synth->add_option("-n", count)->capture_default_str();
    synth->add_option("--out-dir", out_dir)->required();

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? kExitOk : kExitUsage;
    }

    try {
      if (*encode) return Encode(in_path, out_path, codec_flags);
      if (*decode) return Decode(in_path, out_path, codec_flags);
      if (*harvest) return HarvestCmd(dirs, {min_size, max_size}, out_path, codec_flags);
      if (*train) return Train(tf, codec_flags);
      if (*generate) return Generate(ckpt, count, out_dir);
      if (*select) return Select(sf);
      if (*campaign) return Campaign(cf);
      if (*report) return Report(dirs, csv_out);
      if (*synth) return Synth(target_spec, count, out_dir);
    } catch (const internal::UsageError &e) {
      err_ << "usage error: " << e.what() << "\n" << app.help();
      return kExitUsage;
    } catch (const Error &e) {
      err_ << "error: " << e.what() << "\n";
      return kExitDomainError;
    } catch (const std::exception &e) {
      err_ << "error: " << e.what() << "\n";
      return kExitDomainError;
    }
    return kExitUsage;
  }

 private:
  struct CodecFlags {
    std::optional<int> k, rows, cols;

    CodecConfig Resolve(CodecConfig base = {}) const {
      if (k) base.group_size = *k;
      if (rows) base.rows = *rows;
      if (cols) base.cols = *cols;
      base.Validate();
      return base;
    }
  };

  struct TrainFlags {
    std::string manifest, out, resume;
    uint64_t steps = 0;
    std::optional<uint64_t> total_steps;
    TrainConfig cfg;
    std::string gen_hidden = "512,1024";
    std::string critic_hidden = "1024,512";
    uint64_t log_every = 100;
  };

  struct SelectFlags {
    std::string strategy;
    std::vector<std::string> pools;
    size_t n = 100;
    std::string coverage_dump, target, out_dir;
    uint64_t hotset_execs = 2000;
    std::optional<double> hotset_seconds;
  };

  struct CampaignFlags {
    std::string target, seeds, out, label;
    CampaignConfig cfg;
    std::optional<double> wall_clock;
  };

  static void AddCodecFlags(CLI::App *cmd, CodecFlags &f) {
    cmd->add_option("--k", f.k, "Base-65 digits per matrix element (1..6, default 6)");
    cmd->add_option("--rows", f.rows, "Matrix rows (default 64)");
    cmd->add_option("--cols", f.cols, "Matrix columns (default 64)");
  }

  void Progress(const std::string &line) {
    if (!quiet_) out_ << line << "\n";
  }

  int Encode(const std::string &in, const std::string &out, const CodecFlags &f) {
    const CodecConfig cfg = f.Resolve();
    const Bytes raw = ReadBytes(in);
    SaveMatrix(out, EncodeBytes(raw, cfg), cfg.group_size);
    Progress("event=encode bytes=" + std::to_string(raw.size()) + " out=" + out);
    return kExitOk;
  }

  int Decode(const std::string &in, const std::string &out, const CodecFlags &f) {
    MatrixFile mf = LoadMatrix(in);
    CodecConfig base;
    base.group_size = mf.group_size;
    base.rows = mf.matrix.rows;
    base.cols = mf.matrix.cols;
    const CodecConfig cfg = f.Resolve(base);
    if (cfg.rows != mf.matrix.rows || cfg.cols != mf.matrix.cols) {
      throw Error(ErrorCode::kDimensionMismatch, "matrix file is " + std::to_string(mf.matrix.rows) +
                                                     "x" + std::to_string(mf.matrix.cols));
    }
    const Bytes raw = DecodeMatrix(mf.matrix, cfg);
    WriteBytes(out, raw);
    Progress("event=decode bytes=" + std::to_string(raw.size()) + " out=" + out);
    return kExitOk;
  }

  int HarvestCmd(const std::vector<std::string> &dirs, SizeWindow window, const std::string &out,
                 const CodecFlags &f) {
    if (window.min_bytes > window.max_bytes) throw internal::UsageError("--min-size exceeds --max-size");
    const CodecConfig cfg = f.Resolve();
    std::vector<std::filesystem::path> roots(dirs.begin(), dirs.end());
    const CorpusManifest m = Harvest(roots, window, cfg);
    SaveManifest(out, m);
    size_t crashes = 0;
    for (const auto &e : m.entries) crashes += e.kind == SourceKind::kCrash;
    Progress("event=harvest entries=" + std::to_string(m.entries.size()) +
             " crashes=" + std::to_string(crashes) + " out=" + out);
    return kExitOk;
  }

  int Train(TrainFlags &tf, const CodecFlags &f) {
    tf.cfg.generator_hidden = internal::ParseWidths(tf.gen_hidden);
    tf.cfg.critic_hidden = internal::ParseWidths(tf.critic_hidden);
    tf.cfg.total_steps = tf.total_steps.value_or(tf.steps);
    WganState state;
    if (!tf.resume.empty()) {
      state = LoadCheckpoint(tf.resume);
      tf.cfg.total_steps = tf.total_steps.value_or(state.step + tf.steps);
    }
    const CodecConfig codec = tf.resume.empty() ? f.Resolve() : state.codec;
    if (tf.resume.empty()) state = MakeWganState(tf.cfg, codec, rng_seed_);

    const CorpusManifest m = LoadManifest(tf.manifest);
    const TrainingBatch data = LoadTrainingBatch(m, codec);
    WganTrainer trainer(data, tf.cfg);
    Progress("event=train_start files=" + std::to_string(data.matrices.size()) +
             " steps=" + std::to_string(tf.steps) + " elements=" + std::to_string(codec.elements()));
    WganState last_good = state;
    try {
      for (uint64_t i = 0; i < tf.steps; ++i) {
        last_good = state;
        StepReport r = trainer.Step(state);
        if (tf.log_every && (state.step % tf.log_every == 0 || i + 1 == tf.steps)) {
          std::ostringstream line;
          line << "event=step step=" << state.step << " lr=" << r.learning_rate
               << " w_estimate=" << r.wasserstein_estimate << " g_loss=" << r.generator_loss;
          Progress(line.str());
        }
      }
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNonFiniteLoss && e.code() != ErrorCode::kNonFiniteGradient) throw;
      SaveCheckpoint(last_good, tf.out);
      err_ << "error: " << e.what() << "; last good checkpoint (step " << last_good.step
           << ") written to " << tf.out << "\n";
      return kExitDomainError;
    }
    SaveCheckpoint(state, tf.out);
    Progress("event=train_done step=" + std::to_string(state.step) + " out=" + tf.out);
    return kExitOk;
  }

  int Generate(const std::string &ckpt, int64_t n, const std::string &out_dir) {
    const WganState state = LoadCheckpoint(ckpt);
    const auto files = SampleSeedFiles(state, n, rng_seed_);
    internal::WriteNumbered(files, out_dir, "seed_");
    Progress("event=generate files=" + std::to_string(files.size()) + " out_dir=" + out_dir);
    return kExitOk;
  }

  int Select(const SelectFlags &sf) {
    const bool needs_coverage = sf.strategy == "peachset" || sf.strategy == "cmin";
    if (needs_coverage && sf.coverage_dump.empty() && sf.target.empty()) {
      throw internal::UsageError("--strategy " + sf.strategy + " needs --coverage-dump or --target");
    }
    if (sf.strategy == "hotset" && sf.target.empty()) {
      throw internal::UsageError("--strategy hotset needs --target");
    }
    if (sf.strategy != "afl-result" && sf.pools.size() != 1) {
      throw internal::UsageError("--strategy " + sf.strategy + " takes exactly one --pool");
    }
    SeedSet seeds;
    if (sf.strategy == "afl-result") {
      std::vector<std::filesystem::path> roots(sf.pools.begin(), sf.pools.end());
      seeds = SelectAflResult(roots, sf.n, rng_seed_);
    } else {
      const auto pool = ListPool(sf.pools.front());
      if (sf.strategy == "random") {
        seeds = SelectRandom(pool, sf.n, rng_seed_);
      } else if (sf.strategy == "hotset") {
        HotsetConfig hc;
        hc.executions_per_file = sf.hotset_execs;
        hc.seconds_per_file = sf.hotset_seconds;
        hc.rng_seed = rng_seed_;
        seeds = SelectHotset(pool, SyntheticTarget::FromSpec(sf.target), hc, std::min(sf.n, pool.size()));
      } else {
        std::unique_ptr<CoverageProvider> provider;
        if (!sf.coverage_dump.empty()) {
          provider = std::make_unique<DumpCoverageProvider>(DumpCoverageProvider::Load(sf.coverage_dump));
        } else {
          provider = std::make_unique<TargetCoverageProvider>(SyntheticTarget::FromSpec(sf.target));
        }
        seeds = sf.strategy == "peachset" ? SelectPeachset(pool, *provider) : SelectCmin(pool, *provider);
      }
    }
    WriteSeedSet(seeds, sf.out_dir);
    Progress("event=select strategy=" + sf.strategy + " selected=" + std::to_string(seeds.size()) +
             " out_dir=" + sf.out_dir);
    return kExitOk;
  }

  int Campaign(CampaignFlags &cf) {
    const SyntheticTarget target = SyntheticTarget::FromSpec(cf.target);
    const auto seeds = internal::ReadSeedDir(cf.seeds);
    cf.cfg.rng_seed = rng_seed_;
    cf.cfg.wall_clock_seconds = cf.wall_clock;
    const CampaignStats stats = RunCampaign(seeds, target, cf.cfg);
    const std::string label = cf.label.empty() ? std::filesystem::path(cf.out).filename().string() : cf.label;
    WriteCampaignDir(stats, cf.out, label);
    Progress("event=campaign executions=" + std::to_string(stats.executions) +
             " unique_crashes=" + std::to_string(stats.unique_crashes()) +
             " unique_paths=" + std::to_string(stats.unique_paths()) +
             " max_generation=" + std::to_string(stats.max_generation()) + " out=" + cf.out);
    return kExitOk;
  }

  int Report(const std::vector<std::string> &dirs, const std::string &csv_out) {
    std::vector<std::filesystem::path> roots(dirs.begin(), dirs.end());
    const ComparisonTable t = Compare(roots);
    out_ << ComparisonText(t);
    if (!csv_out.empty()) internal::WriteWholeFile(csv_out, ComparisonCsv(t));
    return kExitOk;
  }

  int Synth(const std::string &spec, int64_t n, const std::string &out_dir) {
    if (n < 1) throw Error(ErrorCode::kInvalidCount, "-n must be >= 1");
    const SyntheticTarget target = SyntheticTarget::FromSpec(spec);
    Rng rng = MakeRng(DeriveSeed(rng_seed_, 0x5717));
    std::vector<Bytes> files;
    for (int64_t i = 0; i < n; ++i) files.push_back(MakeWellFormedFile(target, rng));
    internal::WriteNumbered(files, out_dir, "wf_");
    Progress("event=synth files=" + std::to_string(files.size()) + " out_dir=" + out_dir);
    return kExitOk;
  }

  std::ostream &out_;
  std::ostream &err_;
  uint64_t rng_seed_ = 0;
  bool quiet_ = false;
};

inline int RunCli(int argc, const char *const *argv, std::ostream &out = std::cout,
                  std::ostream &err = std::cerr) {
  return Cli(out, err).Run(argc, argv);
}

}  // namespace seedforge

#endif  // SEEDFORGE_CLI_HPP_
