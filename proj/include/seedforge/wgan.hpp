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

// Wasserstein GAN over seed matrices: MLP generator with a scaled-sigmoid
// output so samples land inside the codec range, MLP critic with an
// unbounded scalar output, weight clipping, Adam and a geometric learning
// rate decay.

#ifndef SEEDFORGE_WGAN_HPP_
#define SEEDFORGE_WGAN_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "seedforge/codec.hpp"
#include "seedforge/corpus.hpp"
#include "seedforge/error.hpp"
#include "seedforge/mlp.hpp"
#include "seedforge/rng.hpp"

namespace seedforge {

struct TrainConfig {
  double lr_start = 0.5e-3;
  double lr_end = 0.5e-12;
  uint64_t total_steps = 10000;
  int batch_size = 64;
  AdamHyper adam;
  double clip_bound = 0.01;
  int n_critic = 5;
  int latent_dim = 100;
  std::vector<Eigen::Index> generator_hidden = {512, 1024};
  std::vector<Eigen::Index> critic_hidden = {1024, 512};
  double leaky_slope = 0.2;
  double init_range = 0.05;

  void Validate() const {
    if (!(lr_start >= lr_end && lr_end > 0)) {
      throw Error(ErrorCode::kInvalidArgument, "need lr_start >= lr_end > 0");
    }
    if (total_steps < 1) throw Error(ErrorCode::kInvalidArgument, "total_steps must be >= 1");
    if (batch_size < 1 || n_critic < 1 || latent_dim < 1) {
      throw Error(ErrorCode::kInvalidArgument, "batch_size, n_critic, latent_dim must be >= 1");
    }
    if (!(clip_bound > 0)) throw Error(ErrorCode::kInvalidArgument, "clip bound must be > 0");
  }
};

struct WganState {
  CodecConfig codec;
  MlpParams generator;
  MlpParams critic;
  AdamMoments generator_moments;
  AdamMoments critic_moments;
  uint64_t step = 0;
  uint64_t critic_updates = 0;
  uint64_t generator_updates = 0;
  double clip_bound = 0.01;
  int n_critic = 5;
  int latent_dim = 100;
  uint64_t rng_seed = 0;

  bool operator==(const WganState &) const = default;
};

// lr(step) = lr_start * (lr_end / lr_start)^(step / total_steps); steps past
// total_steps stay at lr_end.
inline double LrSchedule(uint64_t step, const TrainConfig &cfg) {
  const double frac =
      static_cast<double>(std::min(step, cfg.total_steps)) / static_cast<double>(cfg.total_steps);
  return cfg.lr_start * std::pow(cfg.lr_end / cfg.lr_start, frac);
}

inline WganState MakeWganState(const TrainConfig &cfg, const CodecConfig &codec, uint64_t seed) {
  cfg.Validate();
  codec.Validate();
  WganState s;
  s.codec = codec;
  s.clip_bound = cfg.clip_bound;
  s.n_critic = cfg.n_critic;
  s.latent_dim = cfg.latent_dim;
  s.rng_seed = seed;

  const auto elements = static_cast<Eigen::Index>(codec.elements());
  Rng rng = MakeRng(DeriveSeed(seed, 0x11));
  std::vector<LayerSpec> gen;
  for (auto w : cfg.generator_hidden) gen.push_back({w, Activation::kLeakyRectifier, cfg.leaky_slope});
  gen.push_back({elements, Activation::kScaledSigmoid, codec.max_element()});
  s.generator = MakeMlp(cfg.latent_dim, gen, cfg.init_range, rng);

  std::vector<LayerSpec> crit;
  for (auto w : cfg.critic_hidden) crit.push_back({w, Activation::kLeakyRectifier, cfg.leaky_slope});
  crit.push_back({1, Activation::kIdentity, 0.0});
  s.critic = MakeMlp(elements, crit, cfg.init_range, rng);
  // The clip invariant holds from the start, not only after the first update.
  ClipParams(s.critic, cfg.clip_bound);

  s.generator_moments = AdamMoments::ZerosLike(s.generator);
  s.critic_moments = AdamMoments::ZerosLike(s.critic);
  return s;
}

// latent_dim x count standard normals; column j depends only on (seed, j).
inline Eigen::MatrixXd SampleLatent(int latent_dim, int64_t count, uint64_t seed,
                                    int64_t first_index = 0) {
  Eigen::MatrixXd z(latent_dim, count);
  for (int64_t j = 0; j < count; ++j) {
    Rng rng = MakeRng(DeriveSeed(seed, static_cast<uint64_t>(first_index + j)));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < latent_dim; ++i) z(i, j) = normal(rng);
  }
  return z;
}

inline SeedMatrix GeneratorForward(const MlpParams &generator, std::span<const double> z,
                                   int rows, int cols) {
  if (static_cast<Eigen::Index>(z.size()) != generator.input_width()) {
    throw Error(ErrorCode::kDimensionMismatch, "latent width");
  }
  if (generator.output_width() != static_cast<Eigen::Index>(rows) * cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                "generator emits " + std::to_string(generator.output_width()) + " elements, " +
                    std::to_string(rows * cols) + " expected");
  }
  Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(z.data(), generator.input_width());
  Eigen::MatrixXd y = Predict(generator, x);
  return SeedMatrix(rows, cols, std::vector<double>(y.data(), y.data() + y.size()));
}

inline SeedMatrix GeneratorForward(const WganState &s, std::span<const double> z) {
  return GeneratorForward(s.generator, z, s.codec.rows, s.codec.cols);
}

inline double CriticForward(const MlpParams &critic, const SeedMatrix &m) {
  if (static_cast<Eigen::Index>(m.elements.size()) != critic.input_width() ||
      critic.output_width() != 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "critic expects " + std::to_string(critic.input_width()) + " elements, got " +
                    std::to_string(m.elements.size()));
  }
  Eigen::MatrixXd x =
      Eigen::Map<const Eigen::VectorXd>(m.elements.data(), static_cast<Eigen::Index>(m.elements.size()));
  return Predict(critic, x)(0, 0);
}

// Stacks matrices as columns (elements x count).
inline Eigen::MatrixXd StackColumns(std::span<const SeedMatrix> ms) {
  if (ms.empty()) throw Error(ErrorCode::kInvalidCount, "empty batch");
  const auto width = static_cast<Eigen::Index>(ms.front().elements.size());
  Eigen::MatrixXd out(width, static_cast<Eigen::Index>(ms.size()));
  for (size_t j = 0; j < ms.size(); ++j) {
    if (static_cast<Eigen::Index>(ms[j].elements.size()) != width) {
      throw Error(ErrorCode::kDimensionMismatch, "batch matrices differ in size");
    }
    out.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(ms[j].elements.data(), width);
  }
  return out;
}

struct StepReport {
  int critic_updates = 0;
  int generator_updates = 0;
  double wasserstein_estimate = 0.0;  // mean C(real) - mean C(fake), last critic pass
  double generator_loss = 0.0;        // -mean C(G(z))
  double learning_rate = 0.0;
};

// One critic update maximizing mean C(real) - mean C(fake), followed by
// clipping. Returns the surrogate measured before the update.
inline double CriticUpdate(WganState &s, const Eigen::MatrixXd &real, const Eigen::MatrixXd &fake,
                           double lr, const AdamHyper &adam) {
  ForwardCache on_real = Forward(s.critic, real);
  ForwardCache on_fake = Forward(s.critic, fake);
  const double surrogate = on_real.output.mean() - on_fake.output.mean();
  if (!std::isfinite(surrogate)) throw Error(ErrorCode::kNonFiniteLoss, "critic loss");
  // Loss = mean C(fake) - mean C(real).
  Eigen::MatrixXd g_real = Eigen::MatrixXd::Constant(1, real.cols(), -1.0 / real.cols());
  Eigen::MatrixXd g_fake = Eigen::MatrixXd::Constant(1, fake.cols(), 1.0 / fake.cols());
  MlpGradients grads = Backprop(s.critic, on_real, g_real);
  grads += Backprop(s.critic, on_fake, g_fake);
  AdamUpdate(s.critic, grads, s.critic_moments, s.critic_updates + 1, lr, adam);
  ++s.critic_updates;
  ClipParams(s.critic, s.clip_bound);
  return surrogate;
}

// One generator update minimizing -mean C(G(z)). Returns the loss before it.
inline double GeneratorUpdate(WganState &s, const Eigen::MatrixXd &z, double lr,
                              const AdamHyper &adam) {
  ForwardCache gen = Forward(s.generator, z);
  ForwardCache crit = Forward(s.critic, gen.output);
  const double loss = -crit.output.mean();
  if (!std::isfinite(loss)) throw Error(ErrorCode::kNonFiniteLoss, "generator loss");
  Eigen::MatrixXd g_out = Eigen::MatrixXd::Constant(1, z.cols(), -1.0 / z.cols());
  MlpGradients through_critic = Backprop(s.critic, crit, g_out);
  MlpGradients grads = Backprop(s.generator, gen, through_critic.input);
  AdamUpdate(s.generator, grads, s.generator_moments, s.generator_updates + 1, lr, adam);
  ++s.generator_updates;
  return loss;
}

// n_critic critic updates (one per real batch) then one generator update.
// Latent draws are derived from (rng_seed, step, iteration). On any error
// the state is left as it was.
inline StepReport WganTrainStep(WganState &state, std::span<const Eigen::MatrixXd> real_batches,
                                const TrainConfig &cfg) {
  if (static_cast<int>(real_batches.size()) != state.n_critic) {
    throw Error(ErrorCode::kInvalidCount, "need exactly n_critic real batches");
  }
  const auto width = state.critic.input_width();
  for (const auto &b : real_batches) {
    if (b.cols() < 1) throw Error(ErrorCode::kInvalidCount, "empty real batch");
    if (b.rows() != width) throw Error(ErrorCode::kDimensionMismatch, "real batch width");
  }
  WganState next = state;
  StepReport report;
  report.learning_rate = LrSchedule(next.step, cfg);
  for (int i = 0; i < next.n_critic; ++i) {
    Eigen::MatrixXd z = SampleLatent(next.latent_dim, cfg.batch_size,
                                     DeriveSeed(next.rng_seed, next.step, static_cast<uint64_t>(i)));
    Eigen::MatrixXd fake = Predict(next.generator, z);
    report.wasserstein_estimate =
        CriticUpdate(next, real_batches[static_cast<size_t>(i)], fake, report.learning_rate, cfg.adam);
    ++report.critic_updates;
  }
  Eigen::MatrixXd z = SampleLatent(next.latent_dim, cfg.batch_size,
                                   DeriveSeed(next.rng_seed, next.step,
                                              static_cast<uint64_t>(next.n_critic)));
  report.generator_loss = GeneratorUpdate(next, z, report.learning_rate, cfg.adam);
  ++report.generator_updates;
  ++next.step;
  state = std::move(next);
  return report;
}

inline StepReport WganTrainStep(WganState &state, std::span<const TrainingBatch> real_batches,
                                const TrainConfig &cfg) {
  std::vector<Eigen::MatrixXd> stacked;
  stacked.reserve(real_batches.size());
  for (const auto &b : real_batches) stacked.push_back(StackColumns(b.matrices));
  return WganTrainStep(state, stacked, cfg);
}

// Draws minibatches from a fixed training set and runs training steps.
class WganTrainer {
 public:
  WganTrainer(const TrainingBatch &data, TrainConfig cfg)
      : data_(StackColumns(data.matrices)), cfg_(std::move(cfg)) {
    cfg_.Validate();
  }

  const TrainConfig &config() const { return cfg_; }

  // Minibatch indices depend on (rng_seed, step) only.
  std::vector<Eigen::MatrixXd> RealBatches(const WganState &s) const {
    const auto n = static_cast<uint64_t>(data_.cols());
    const auto batch = std::min<Eigen::Index>(cfg_.batch_size, data_.cols());
    Rng rng = MakeRng(DeriveSeed(s.rng_seed, 0xba7c4, s.step));
    std::vector<Eigen::MatrixXd> out;
    for (int i = 0; i < s.n_critic; ++i) {
      Eigen::MatrixXd m(data_.rows(), batch);
      for (Eigen::Index j = 0; j < batch; ++j) {
        m.col(j) = data_.col(static_cast<Eigen::Index>(UniformBelow(rng, n)));
      }
      out.push_back(std::move(m));
    }
    return out;
  }

  StepReport Step(WganState &s) const {
    if (s.critic.input_width() != data_.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "checkpoint width does not match training data");
    }
    auto batches = RealBatches(s);
    return WganTrainStep(s, batches, cfg_);
  }

  // Runs `steps` steps; `on_step` (optional) sees every report.
  void Train(WganState &s, uint64_t steps,
             const std::function<void(const WganState &, const StepReport &)> &on_step = {}) const {
    for (uint64_t i = 0; i < steps; ++i) {
      StepReport r = Step(s);
      if (on_step) on_step(s, r);
    }
  }

 private:
  Eigen::MatrixXd data_;
  TrainConfig cfg_;
};

inline constexpr int kSampleChunk = 100;

// n generator samples clamped into the codec range. Sample j uses the
// latent vector derived from (seed, j).
inline std::vector<SeedMatrix> SampleSeeds(const WganState &s, int64_t n, uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidCount, "sample count must be >= 1");
  const int rows = s.codec.rows, cols = s.codec.cols;
  if (s.generator.output_width() != static_cast<Eigen::Index>(rows) * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "generator width does not match codec");
  }
  const double hi = s.codec.max_element();
  std::vector<SeedMatrix> out;
  out.reserve(static_cast<size_t>(n));
  for (int64_t first = 0; first < n; first += kSampleChunk) {
    const int64_t count = std::min<int64_t>(kSampleChunk, n - first);
    Eigen::MatrixXd y = Predict(s.generator, SampleLatent(s.latent_dim, count, seed, first));
    for (int64_t j = 0; j < count; ++j) {
      std::vector<double> v(y.col(j).data(), y.col(j).data() + y.rows());
      for (double &e : v) e = std::isnan(e) ? 0.0 : std::clamp(e, 0.0, hi);
      out.emplace_back(rows, cols, std::move(v));
    }
  }
  return out;
}

inline std::vector<Bytes> SampleSeedFiles(const WganState &s, int64_t n, uint64_t seed) {
  std::vector<Bytes> files;
  for (const auto &m : SampleSeeds(s, n, seed)) files.push_back(DecodeMatrix(m, s.codec));
  return files;
}

}  // namespace seedforge

#endif  // SEEDFORGE_WGAN_HPP_
