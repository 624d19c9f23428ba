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

// Dense multilayer perceptron with explicit reverse-mode gradients and Adam.
//
// Batches are column-major: a batch of B inputs of width n is an n x B
// matrix, one sample per column.

#ifndef SEEDFORGE_MLP_HPP_
#define SEEDFORGE_MLP_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "seedforge/error.hpp"
#include "seedforge/rng.hpp"

namespace seedforge {

enum class Activation { kRectifier, kLeakyRectifier, kScaledSigmoid, kIdentity };

inline std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kRectifier: return "rectifier";
    case Activation::kLeakyRectifier: return "leaky-rectifier";
    case Activation::kScaledSigmoid: return "scaled-sigmoid";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

inline Activation ActivationFromName(std::string_view name) {
  for (auto a : {Activation::kRectifier, Activation::kLeakyRectifier, Activation::kScaledSigmoid,
                 Activation::kIdentity}) {
    if (ActivationName(a) == name) return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown activation '" + std::string(name) + "'");
}

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
  Activation activation = Activation::kIdentity;
  // Negative slope for leaky-rectifier, output scale for scaled-sigmoid.
  double activation_param = 0.0;

  Eigen::Index in() const { return weight.cols(); }
  Eigen::Index out() const { return weight.rows(); }

  bool operator==(const DenseLayer &o) const {
    return weight == o.weight && bias == o.bias && activation == o.activation &&
           activation_param == o.activation_param;
  }
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  Eigen::Index input_width() const { return layers.empty() ? 0 : layers.front().in(); }
  Eigen::Index output_width() const { return layers.empty() ? 0 : layers.back().out(); }

  void Validate() const {
    if (layers.empty()) throw Error(ErrorCode::kShapeMismatch, "network has no layers");
    for (size_t i = 0; i < layers.size(); ++i) {
      const auto &l = layers[i];
      if (l.bias.size() != l.out()) throw Error(ErrorCode::kShapeMismatch, "bias width");
      if (i > 0 && layers[i - 1].out() != l.in()) {
        throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(i) + " input width");
      }
      if (!l.weight.allFinite() || !l.bias.allFinite()) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite parameter");
      }
    }
  }

  bool operator==(const MlpParams &) const = default;
};

struct LayerSpec {
  Eigen::Index width;
  Activation activation;
  double activation_param = 0.0;
};

// Weights and biases uniform in [-init_range, init_range].
inline MlpParams MakeMlp(Eigen::Index input_width, const std::vector<LayerSpec> &specs,
                         double init_range, Rng &rng) {
  MlpParams p;
  Eigen::Index in = input_width;
  for (const auto &s : specs) {
    DenseLayer l;
    l.weight.resize(s.width, in);
    l.bias.resize(s.width);
    // Filled column by column so the draw order is fixed.
    for (Eigen::Index c = 0; c < in; ++c)
      for (Eigen::Index r = 0; r < s.width; ++r)
        l.weight(r, c) = (2.0 * UniformUnit(rng) - 1.0) * init_range;
    for (Eigen::Index r = 0; r < s.width; ++r) l.bias(r) = (2.0 * UniformUnit(rng) - 1.0) * init_range;
    l.activation = s.activation;
    l.activation_param = s.activation_param;
    p.layers.push_back(std::move(l));
    in = s.width;
  }
  return p;
}

namespace internal {

inline double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline void Activate(const DenseLayer &l, const Eigen::MatrixXd &pre, Eigen::MatrixXd &out) {
  switch (l.activation) {
    case Activation::kRectifier:
      out = pre.cwiseMax(0.0);
      break;
    case Activation::kLeakyRectifier: {
      const double slope = l.activation_param;
      out = pre.unaryExpr([slope](double x) { return x > 0 ? x : slope * x; });
      break;
    }
    case Activation::kScaledSigmoid: {
      const double scale = l.activation_param;
      out = pre.unaryExpr([scale](double x) { return scale * Sigmoid(x); });
      break;
    }
    case Activation::kIdentity:
      out = pre;
      break;
  }
}

// d(out)/d(pre) applied elementwise to `grad`, in place.
inline void ActivationBackward(const DenseLayer &l, const Eigen::MatrixXd &pre,
                               Eigen::MatrixXd &grad) {
  switch (l.activation) {
    case Activation::kRectifier:
      grad = grad.cwiseProduct(pre.unaryExpr([](double x) { return x > 0 ? 1.0 : 0.0; }));
      break;
    case Activation::kLeakyRectifier: {
      const double slope = l.activation_param;
      grad = grad.cwiseProduct(pre.unaryExpr([slope](double x) { return x > 0 ? 1.0 : slope; }));
      break;
    }
    case Activation::kScaledSigmoid: {
      const double scale = l.activation_param;
      grad = grad.cwiseProduct(pre.unaryExpr([scale](double x) {
        const double s = Sigmoid(x);
        return scale * s * (1.0 - s);
      }));
      break;
    }
    case Activation::kIdentity:
      break;
  }
}

}  // namespace internal

// Per-layer inputs and pre-activations from one forward pass.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> preactivations;
  Eigen::MatrixXd output;
};

inline ForwardCache Forward(const MlpParams &p, const Eigen::MatrixXd &x) {
  if (p.layers.empty() || x.rows() != p.input_width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input width " + std::to_string(x.rows()) + " vs network " +
                    std::to_string(p.input_width()));
  }
  ForwardCache cache;
  cache.inputs.reserve(p.layers.size());
  cache.preactivations.reserve(p.layers.size());
  Eigen::MatrixXd h = x;
  for (const auto &l : p.layers) {
    Eigen::MatrixXd pre(l.out(), h.cols());
    pre.noalias() = l.weight * h;
    pre.colwise() += l.bias;
    cache.inputs.push_back(std::move(h));
    Eigen::MatrixXd act;
    internal::Activate(l, pre, act);
    cache.preactivations.push_back(std::move(pre));
    h = std::move(act);
  }
  cache.output = std::move(h);
  return cache;
}

inline Eigen::MatrixXd Predict(const MlpParams &p, const Eigen::MatrixXd &x) {
  return Forward(p, x).output;
}

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;
  Eigen::MatrixXd input;  // dL/dx, same shape as the forward input

  static MlpGradients ZerosLike(const MlpParams &p) {
    MlpGradients g;
    for (const auto &l : p.layers) {
      g.weight.push_back(Eigen::MatrixXd::Zero(l.out(), l.in()));
      g.bias.push_back(Eigen::VectorXd::Zero(l.out()));
    }
    return g;
  }

  MlpGradients &operator+=(const MlpGradients &o) {
    for (size_t i = 0; i < weight.size(); ++i) {
      weight[i] += o.weight[i];
      bias[i] += o.bias[i];
    }
    return *this;
  }

  bool AllFinite() const {
    for (size_t i = 0; i < weight.size(); ++i) {
      if (!weight[i].allFinite() || !bias[i].allFinite()) return false;
    }
    return true;
  }
};

// Reverse-mode gradients of a scalar loss given dL/d(output) for the batch
// held in `cache`. Gradients are summed over the batch columns.
inline MlpGradients Backprop(const MlpParams &p, const ForwardCache &cache,
                             const Eigen::MatrixXd &output_grad) {
  if (cache.inputs.size() != p.layers.size() || output_grad.rows() != p.output_width() ||
      output_grad.cols() != cache.output.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient does not match cached forward pass");
  }
  MlpGradients g;
  g.weight.resize(p.layers.size());
  g.bias.resize(p.layers.size());
  Eigen::MatrixXd delta = output_grad;
  for (size_t i = p.layers.size(); i-- > 0;) {
    const DenseLayer &l = p.layers[i];
    internal::ActivationBackward(l, cache.preactivations[i], delta);
    g.weight[i].noalias() = delta * cache.inputs[i].transpose();
    g.bias[i] = delta.rowwise().sum();
    Eigen::MatrixXd next(l.in(), delta.cols());
    next.noalias() = l.weight.transpose() * delta;
    delta = std::move(next);
  }
  g.input = std::move(delta);
  return g;
}

struct AdamHyper {
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

struct AdamMoments {
  std::vector<Eigen::MatrixXd> weight_m, weight_v;
  std::vector<Eigen::VectorXd> bias_m, bias_v;

  static AdamMoments ZerosLike(const MlpParams &p) {
    AdamMoments m;
    for (const auto &l : p.layers) {
      m.weight_m.push_back(Eigen::MatrixXd::Zero(l.out(), l.in()));
      m.weight_v.push_back(Eigen::MatrixXd::Zero(l.out(), l.in()));
      m.bias_m.push_back(Eigen::VectorXd::Zero(l.out()));
      m.bias_v.push_back(Eigen::VectorXd::Zero(l.out()));
    }
    return m;
  }

  bool operator==(const AdamMoments &) const = default;
};

// One bias-corrected Adam step; `step` is the 1-based update count.
// Parameters and moments are left untouched when a gradient is non-finite.
inline void AdamUpdate(MlpParams &p, const MlpGradients &g, AdamMoments &m, uint64_t step,
                       double lr, const AdamHyper &h) {
  if (step < 1) throw Error(ErrorCode::kInvalidArgument, "Adam step must be >= 1");
  if (g.weight.size() != p.layers.size() || m.weight_m.size() != p.layers.size()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient/moment layer count");
  }
  for (size_t i = 0; i < p.layers.size(); ++i) {
    if (g.weight[i].rows() != p.layers[i].out() || g.weight[i].cols() != p.layers[i].in() ||
        g.bias[i].size() != p.layers[i].out()) {
      throw Error(ErrorCode::kShapeMismatch, "gradient shape of layer " + std::to_string(i));
    }
  }
  if (!g.AllFinite()) throw Error(ErrorCode::kNonFiniteGradient, "gradient has NaN/Inf");

  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(step));
  auto apply = [&](auto &theta, const auto &grad, auto &mom, auto &vel) {
    mom = h.beta1 * mom + (1.0 - h.beta1) * grad;
    vel = h.beta2 * vel + (1.0 - h.beta2) * grad.cwiseProduct(grad);
    theta.array() -= lr * (mom.array() / c1) / ((vel.array() / c2).sqrt() + h.epsilon);
  };
  for (size_t i = 0; i < p.layers.size(); ++i) {
    apply(p.layers[i].weight, g.weight[i], m.weight_m[i], m.weight_v[i]);
    apply(p.layers[i].bias, g.bias[i], m.bias_m[i], m.bias_v[i]);
  }
}

inline void ClipParams(MlpParams &p, double bound) {
  for (auto &l : p.layers) {
    l.weight = l.weight.cwiseMax(-bound).cwiseMin(bound);
    l.bias = l.bias.cwiseMax(-bound).cwiseMin(bound);
  }
}

inline double MaxAbsParam(const MlpParams &p) {
  double m = 0.0;
  for (const auto &l : p.layers) {
    if (l.weight.size()) m = std::max(m, l.weight.cwiseAbs().maxCoeff());
    if (l.bias.size()) m = std::max(m, l.bias.cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace seedforge

#endif  // SEEDFORGE_MLP_HPP_
