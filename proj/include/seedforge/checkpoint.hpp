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

// SSWG checkpoints: "SSWG0001", u64 little-endian header length, a JSON
// header describing every array, then the arrays as little-endian doubles.
// Matrices are stored row-major (out x in).

#ifndef SEEDFORGE_CHECKPOINT_HPP_
#define SEEDFORGE_CHECKPOINT_HPP_

#include <bit>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/error.hpp"
#include "seedforge/mlp.hpp"
#include "seedforge/wgan.hpp"

namespace seedforge {

inline constexpr std::string_view kCheckpointMagic = "SSWG0001";

namespace internal {

struct ArrayWriter {
  std::string data;
  nlohmann::json index = nlohmann::json::array();

  void Add(const std::string &name, const Eigen::MatrixXd &m) {
    index.push_back({{"name", name}, {"offset", data.size()}, {"rows", m.rows()}, {"cols", m.cols()}});
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) PutU64(data, std::bit_cast<uint64_t>(m(r, c)));
  }
  void Add(const std::string &name, const Eigen::VectorXd &v) {
    index.push_back({{"name", name}, {"offset", data.size()}, {"rows", v.size()}, {"cols", 1}});
    for (Eigen::Index i = 0; i < v.size(); ++i) PutU64(data, std::bit_cast<uint64_t>(v(i)));
  }
};

inline nlohmann::json DescribeNet(const MlpParams &p) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto &l : p.layers) {
    layers.push_back({{"in", l.in()},
                      {"out", l.out()},
                      {"activation", std::string(ActivationName(l.activation))},
                      {"param", l.activation_param}});
  }
  return layers;
}

inline void WriteNet(ArrayWriter &w, const std::string &prefix, const MlpParams &p,
                     const AdamMoments &m) {
  for (size_t i = 0; i < p.layers.size(); ++i) {
    const std::string base = prefix + "." + std::to_string(i);
    w.Add(base + ".weight", p.layers[i].weight);
    w.Add(base + ".bias", p.layers[i].bias);
    w.Add(base + ".weight_m", m.weight_m[i]);
    w.Add(base + ".weight_v", m.weight_v[i]);
    w.Add(base + ".bias_m", m.bias_m[i]);
    w.Add(base + ".bias_v", m.bias_v[i]);
  }
}

[[noreturn]] inline void Corrupt(const std::string &why) {
  throw Error(ErrorCode::kCorruptCheckpoint, why);
}

class ArrayReader {
 public:
  ArrayReader(std::string_view data, const nlohmann::json &index) : data_(data) {
    for (const auto &a : index) entries_.push_back(a);
  }

  template <typename Target>
  void Read(const std::string &name, Eigen::Index rows, Eigen::Index cols, Target &out) {
    if (next_ >= entries_.size()) Corrupt("missing array " + name);
    const auto &e = entries_[next_++];
    if (e.at("name").get<std::string>() != name || e.at("rows").get<Eigen::Index>() != rows ||
        e.at("cols").get<Eigen::Index>() != cols) {
      Corrupt("array " + name + " does not match the declared layout");
    }
    const auto offset = e.at("offset").get<uint64_t>();
    const uint64_t bytes = static_cast<uint64_t>(rows) * static_cast<uint64_t>(cols) * 8;
    if (offset > data_.size() || data_.size() - offset < bytes) Corrupt("array " + name + " truncated");
    out.resize(rows, cols);
    size_t at = offset;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c, at += 8) out(r, c) = std::bit_cast<double>(GetU64(data_, at));
  }

  bool Exhausted() const { return next_ == entries_.size(); }

 private:
  std::string_view data_;
  std::vector<nlohmann::json> entries_;
  size_t next_ = 0;
};

inline MlpParams ShapeNet(const nlohmann::json &layers) {
  MlpParams p;
  for (const auto &l : layers) {
    DenseLayer d;
    d.weight.resize(l.at("out").get<Eigen::Index>(), l.at("in").get<Eigen::Index>());
    d.bias.resize(l.at("out").get<Eigen::Index>());
    d.activation = ActivationFromName(l.at("activation").get<std::string>());
    d.activation_param = l.at("param").get<double>();
    p.layers.push_back(std::move(d));
  }
  return p;
}

inline void ReadNet(ArrayReader &r, const std::string &prefix, MlpParams &p, AdamMoments &m) {
  m = AdamMoments::ZerosLike(p);
  for (size_t i = 0; i < p.layers.size(); ++i) {
    const std::string base = prefix + "." + std::to_string(i);
    auto &l = p.layers[i];
    const auto out = l.out(), in = l.in();
    r.Read(base + ".weight", out, in, l.weight);
    r.Read(base + ".bias", out, 1, l.bias);
    r.Read(base + ".weight_m", out, in, m.weight_m[i]);
    r.Read(base + ".weight_v", out, in, m.weight_v[i]);
    r.Read(base + ".bias_m", out, 1, m.bias_m[i]);
    r.Read(base + ".bias_v", out, 1, m.bias_v[i]);
  }
}

}  // namespace internal

inline std::string SerializeCheckpoint(const WganState &s) {
  internal::ArrayWriter w;
  internal::WriteNet(w, "generator", s.generator, s.generator_moments);
  internal::WriteNet(w, "critic", s.critic, s.critic_moments);
  nlohmann::json header = {
      {"codec", {{"rows", s.codec.rows}, {"cols", s.codec.cols}, {"group_size", s.codec.group_size},
                 {"alphabet", std::string(s.codec.alphabet.begin(), s.codec.alphabet.end())}}},
      {"generator", internal::DescribeNet(s.generator)},
      {"critic", internal::DescribeNet(s.critic)},
      {"clip_bound", s.clip_bound},
      {"n_critic", s.n_critic},
      {"latent_dim", s.latent_dim},
      {"step", s.step},
      {"critic_updates", s.critic_updates},
      {"generator_updates", s.generator_updates},
      {"rng_seed", s.rng_seed},
      {"arrays", std::move(w.index)},
  };
  const std::string head = header.dump();
  std::string out(kCheckpointMagic);
  internal::PutU64(out, head.size());
  out += head;
  out += w.data;
  return out;
}

inline WganState ParseCheckpoint(std::string_view data) {
  using internal::Corrupt;
  if (data.size() < 16 || data.substr(0, 8) != kCheckpointMagic) Corrupt("bad magic");
  const uint64_t head_len = internal::GetU64(data, 8);
  if (head_len > data.size() - 16) Corrupt("header truncated");
  nlohmann::json h = nlohmann::json::parse(data.substr(16, head_len), nullptr, false);
  if (h.is_discarded()) Corrupt("header is not JSON");
  try {
    WganState s;
    const auto &c = h.at("codec");
    s.codec.rows = c.at("rows").get<int>();
    s.codec.cols = c.at("cols").get<int>();
    s.codec.group_size = c.at("group_size").get<int>();
    const std::string alphabet = c.at("alphabet").get<std::string>();
    if (alphabet.size() != kAlphabetSize) Corrupt("alphabet size");
    std::copy(alphabet.begin(), alphabet.end(), s.codec.alphabet.begin());
    s.clip_bound = h.at("clip_bound").get<double>();
    s.n_critic = h.at("n_critic").get<int>();
    s.latent_dim = h.at("latent_dim").get<int>();
    s.step = h.at("step").get<uint64_t>();
    s.critic_updates = h.at("critic_updates").get<uint64_t>();
    s.generator_updates = h.at("generator_updates").get<uint64_t>();
    s.rng_seed = h.at("rng_seed").get<uint64_t>();
    s.generator = internal::ShapeNet(h.at("generator"));
    s.critic = internal::ShapeNet(h.at("critic"));
    internal::ArrayReader reader(data.substr(16 + head_len), h.at("arrays"));
    internal::ReadNet(reader, "generator", s.generator, s.generator_moments);
    internal::ReadNet(reader, "critic", s.critic, s.critic_moments);
    if (!reader.Exhausted()) Corrupt("unexpected extra arrays");
    try {
      s.codec.Validate();
      s.generator.Validate();
      s.critic.Validate();
    } catch (const Error &e) {
      Corrupt(e.what());
    }
    return s;
  } catch (const nlohmann::json::exception &e) {
    Corrupt(std::string("header: ") + e.what());
  }
}

inline void SaveCheckpoint(const WganState &s, const std::filesystem::path &path) {
  internal::WriteWholeFile(path, SerializeCheckpoint(s));
}

inline WganState LoadCheckpoint(const std::filesystem::path &path) {
  return ParseCheckpoint(internal::ReadWholeFile(path));
}

}  // namespace seedforge

#endif  // SEEDFORGE_CHECKPOINT_HPP_
