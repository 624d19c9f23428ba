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

// Reversible conversion between byte files and normalized real matrices.
//
// A file is Base64-encoded, every Base64 symbol (including '=') becomes a
// code in 0..64, groups of k codes are read as one big-endian base-65
// integer, and that integer is divided by a power of ten so the matrix holds
// reals in [0, (65^k - 1) / divisor]. For the default k = 6 the range is
// [0, 0.75418890624].

#ifndef SEEDFORGE_CODEC_HPP_
#define SEEDFORGE_CODEC_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedforge/error.hpp"

namespace seedforge {

using Bytes = std::vector<uint8_t>;

inline constexpr int kAlphabetSize = 65;
inline constexpr int kMaxGroupSize = 6;
inline constexpr std::string_view kStandardAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/=";

constexpr uint64_t IntPow(uint64_t base, int exp) {
  uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

struct CodecConfig {
  int group_size = 6;
  int rows = 64;
  int cols = 64;
  std::array<char, kAlphabetSize> alphabet = [] {
    std::array<char, kAlphabetSize> a{};
    std::copy(kStandardAlphabet.begin(), kStandardAlphabet.end(), a.begin());
    return a;
  }();

  size_t elements() const { return static_cast<size_t>(rows) * cols; }
  // Largest packed integer, 65^k - 1.
  uint64_t max_group_value() const { return IntPow(kAlphabetSize, group_size) - 1; }
  // Smallest power of ten >= 65^k - 1 (10^11 for k = 6).
  uint64_t divisor() const {
    uint64_t d = 1;
    while (d < max_group_value()) d *= 10;
    return d;
  }
  double max_element() const {
    return static_cast<double>(max_group_value()) / static_cast<double>(divisor());
  }
  size_t symbol_capacity() const { return elements() * group_size; }
  size_t byte_capacity() const { return symbol_capacity() / 4 * 3; }

  void Validate() const {
    if (group_size < 1 || group_size > kMaxGroupSize) {
      throw Error(ErrorCode::kInvalidArgument,
                  "group size must be in 1..6, got " + std::to_string(group_size));
    }
    if (rows < 1 || cols < 1) {
      throw Error(ErrorCode::kInvalidArgument, "matrix dimensions must be positive");
    }
    std::array<bool, 256> seen{};
    for (char c : alphabet) {
      auto u = static_cast<unsigned char>(c);
      if (seen[u]) throw Error(ErrorCode::kInvalidArgument, "alphabet has duplicate symbols");
      seen[u] = true;
    }
    if (!seen[static_cast<unsigned char>('=')]) {
      throw Error(ErrorCode::kInvalidArgument, "alphabet must contain '='");
    }
  }

  bool operator==(const CodecConfig &) const = default;
};

struct SeedMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> elements;  // row-major

  SeedMatrix() = default;
  SeedMatrix(int r, int c) : rows(r), cols(c), elements(static_cast<size_t>(r) * c, 0.0) {}
  SeedMatrix(int r, int c, std::vector<double> values)
      : rows(r), cols(c), elements(std::move(values)) {
    if (elements.size() != static_cast<size_t>(r) * c) {
      throw Error(ErrorCode::kDimensionMismatch, "element count does not match rows*cols");
    }
  }

  double &at(int r, int c) { return elements[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return elements[static_cast<size_t>(r) * cols + c]; }

  bool operator==(const SeedMatrix &) const = default;
};

namespace internal {

inline std::array<int8_t, 256> ReverseAlphabet(const CodecConfig &cfg) {
  std::array<int8_t, 256> rev;
  rev.fill(-1);
  for (int i = 0; i < kAlphabetSize; ++i) {
    rev[static_cast<unsigned char>(cfg.alphabet[i])] = static_cast<int8_t>(i);
  }
  return rev;
}

}  // namespace internal

inline int CharToCode(char symbol, const CodecConfig &cfg = {}) {
  for (int i = 0; i < kAlphabetSize; ++i) {
    if (cfg.alphabet[i] == symbol) return i;
  }
  throw Error(ErrorCode::kUnknownSymbol,
              "symbol 0x" + std::to_string(static_cast<unsigned char>(symbol)) +
                  " is not in the alphabet");
}

inline char CodeToChar(int code, const CodecConfig &cfg = {}) {
  if (code < 0 || code >= kAlphabetSize) {
    throw Error(ErrorCode::kCodeOutOfRange, "code " + std::to_string(code));
  }
  return cfg.alphabet[code];
}

inline double PackGroup(std::span<const int> codes, const CodecConfig &cfg = {}) {
  if (codes.size() != static_cast<size_t>(cfg.group_size)) {
    throw Error(ErrorCode::kCodeOutOfRange, "group must hold exactly k codes");
  }
  uint64_t value = 0;
  for (int c : codes) {
    if (c < 0 || c >= kAlphabetSize) {
      throw Error(ErrorCode::kCodeOutOfRange, "code " + std::to_string(c));
    }
    value = value * kAlphabetSize + static_cast<uint64_t>(c);
  }
  return static_cast<double>(value) / static_cast<double>(cfg.divisor());
}

// Exact for every group value because 65^6 - 1 < 2^53.
inline uint64_t UnpackGroupValue(double element, const CodecConfig &cfg = {}) {
  const double scaled = element * static_cast<double>(cfg.divisor());
  const double max_value = static_cast<double>(cfg.max_group_value());
  if (!std::isfinite(scaled) || scaled < -0.5 || scaled >= max_value + 0.5) {
    throw Error(ErrorCode::kElementOutOfRange, "element " + std::to_string(element));
  }
  const double rounded = std::nearbyint(scaled);
  if (rounded < 0.0 || rounded > max_value) {
    throw Error(ErrorCode::kElementOutOfRange, "element " + std::to_string(element));
  }
  return static_cast<uint64_t>(rounded);
}

inline std::vector<int> UnpackGroup(double element, const CodecConfig &cfg = {}) {
  uint64_t value = UnpackGroupValue(element, cfg);
  std::vector<int> codes(cfg.group_size);
  for (int i = cfg.group_size - 1; i >= 0; --i) {
    codes[i] = static_cast<int>(value % kAlphabetSize);
    value /= kAlphabetSize;
  }
  return codes;
}

// Standard Base64 with '=' padding, emitted through cfg's alphabet.
inline std::string Base64Encode(std::span<const uint8_t> raw, const CodecConfig &cfg = {}) {
  std::string out;
  out.reserve((raw.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= raw.size(); i += 3) {
    uint32_t w = (uint32_t{raw[i]} << 16) | (uint32_t{raw[i + 1]} << 8) | raw[i + 2];
    out.push_back(cfg.alphabet[(w >> 18) & 63]);
    out.push_back(cfg.alphabet[(w >> 12) & 63]);
    out.push_back(cfg.alphabet[(w >> 6) & 63]);
    out.push_back(cfg.alphabet[w & 63]);
  }
  const size_t rest = raw.size() - i;
  if (rest > 0) {
    uint32_t w = uint32_t{raw[i]} << 16;
    if (rest == 2) w |= uint32_t{raw[i + 1]} << 8;
    out.push_back(cfg.alphabet[(w >> 18) & 63]);
    out.push_back(cfg.alphabet[(w >> 12) & 63]);
    out.push_back(rest == 2 ? cfg.alphabet[(w >> 6) & 63] : cfg.alphabet[64]);
    out.push_back(cfg.alphabet[64]);
  }
  return out;
}

// Lenient decoder: pad symbols are skipped wherever they occur, a trailing
// remainder of one symbol is dropped, and a remainder of two or three
// symbols yields one or two bytes.
inline Bytes Base64DecodeLenient(std::string_view text, const CodecConfig &cfg = {}) {
  const auto rev = internal::ReverseAlphabet(cfg);
  Bytes out;
  out.reserve(text.size() / 4 * 3 + 2);
  uint32_t acc = 0;
  int held = 0;
  for (char c : text) {
    int code = rev[static_cast<unsigned char>(c)];
    if (code < 0) {
      throw Error(ErrorCode::kUnknownSymbol, "symbol outside the alphabet");
    }
    if (code == 64) continue;
    acc = (acc << 6) | static_cast<uint32_t>(code);
    if (++held == 4) {
      out.push_back(static_cast<uint8_t>(acc >> 16));
      out.push_back(static_cast<uint8_t>(acc >> 8));
      out.push_back(static_cast<uint8_t>(acc));
      acc = 0;
      held = 0;
    }
  }
  if (held == 2) {
    out.push_back(static_cast<uint8_t>(acc >> 4));
  } else if (held == 3) {
    out.push_back(static_cast<uint8_t>(acc >> 10));
    out.push_back(static_cast<uint8_t>(acc >> 2));
  }
  return out;
}

inline SeedMatrix EncodeBytes(std::span<const uint8_t> raw, const CodecConfig &cfg = {}) {
  cfg.Validate();
  const std::string text = Base64Encode(raw, cfg);
  if (text.size() > cfg.symbol_capacity()) {
    throw Error(ErrorCode::kCapacityExceeded,
                std::to_string(raw.size()) + " bytes exceed capacity of " +
                    std::to_string(cfg.byte_capacity()));
  }
  const auto rev = internal::ReverseAlphabet(cfg);
  SeedMatrix m(cfg.rows, cfg.cols);
  const double divisor = static_cast<double>(cfg.divisor());
  const size_t k = static_cast<size_t>(cfg.group_size);
  for (size_t g = 0; g * k < text.size(); ++g) {
    uint64_t value = 0;
    for (size_t j = 0; j < k; ++j) {
      const size_t pos = g * k + j;
      const uint64_t code = pos < text.size() ? rev[static_cast<unsigned char>(text[pos])] : 0;
      value = value * kAlphabetSize + code;
    }
    m.elements[g] = static_cast<double>(value) / divisor;
  }
  return m;
}

// Symbol string recovered from a matrix, before end-of-data trimming.
inline std::string MatrixToSymbols(const SeedMatrix &m, const CodecConfig &cfg = {}) {
  std::string text;
  text.reserve(m.elements.size() * cfg.group_size);
  char group[kMaxGroupSize];
  for (double e : m.elements) {
    uint64_t value = UnpackGroupValue(e, cfg);
    for (int i = cfg.group_size - 1; i >= 0; --i) {
      group[i] = cfg.alphabet[value % kAlphabetSize];
      value /= kAlphabetSize;
    }
    text.append(group, group + cfg.group_size);
  }
  return text;
}

inline Bytes DecodeMatrix(const SeedMatrix &m, const CodecConfig &cfg = {}) {
  cfg.Validate();
  std::string text = MatrixToSymbols(m, cfg);
  const char zero = cfg.alphabet[0];
  while (!text.empty() && text.back() == zero) text.pop_back();
  if (auto last_pad = text.rfind(cfg.alphabet[64]); last_pad != std::string::npos) {
    text.resize(last_pad + 1);
  }
  return Base64DecodeLenient(text, cfg);
}

// SSMX interchange format: "SSMX0001", u32 rows, u32 cols, u32 k, then
// rows*cols little-endian doubles, row-major.
inline constexpr std::string_view kMatrixMagic = "SSMX0001";

namespace internal {

inline void PutU32(std::string &out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void PutU64(std::string &out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline uint32_t GetU32(std::string_view in, size_t off) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t{static_cast<unsigned char>(in[off + i])} << (8 * i);
  return v;
}

inline uint64_t GetU64(std::string_view in, size_t off) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t{static_cast<unsigned char>(in[off + i])} << (8 * i);
  return v;
}

inline std::string ReadWholeFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void WriteWholeFile(const std::filesystem::path &path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

}  // namespace internal

inline Bytes ReadBytes(const std::filesystem::path &path) {
  std::string s = internal::ReadWholeFile(path);
  return Bytes(s.begin(), s.end());
}

inline void WriteBytes(const std::filesystem::path &path, std::span<const uint8_t> data) {
  internal::WriteWholeFile(
      path, std::string_view(reinterpret_cast<const char *>(data.data()), data.size()));
}

inline std::string SerializeMatrix(const SeedMatrix &m, int group_size) {
  std::string out(kMatrixMagic);
  internal::PutU32(out, static_cast<uint32_t>(m.rows));
  internal::PutU32(out, static_cast<uint32_t>(m.cols));
  internal::PutU32(out, static_cast<uint32_t>(group_size));
  for (double e : m.elements) internal::PutU64(out, std::bit_cast<uint64_t>(e));
  return out;
}

struct MatrixFile {
  SeedMatrix matrix;
  int group_size = 0;
};

inline MatrixFile ParseMatrix(std::string_view data) {
  constexpr size_t kHeader = 8 + 12;
  if (data.size() < kHeader || data.substr(0, 8) != kMatrixMagic) {
    throw Error(ErrorCode::kIoFailure, "not an SSMX matrix file");
  }
  const uint32_t rows = internal::GetU32(data, 8);
  const uint32_t cols = internal::GetU32(data, 12);
  const uint32_t k = internal::GetU32(data, 16);
  const uint64_t count = uint64_t{rows} * cols;
  if (rows == 0 || cols == 0 || data.size() != kHeader + count * 8) {
    throw Error(ErrorCode::kIoFailure, "SSMX payload size does not match header");
  }
  std::vector<double> values(count);
  for (uint64_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<double>(internal::GetU64(data, kHeader + i * 8));
  }
  return {SeedMatrix(static_cast<int>(rows), static_cast<int>(cols), std::move(values)),
          static_cast<int>(k)};
}

inline void SaveMatrix(const std::filesystem::path &path, const SeedMatrix &m, int group_size) {
  internal::WriteWholeFile(path, SerializeMatrix(m, group_size));
}

inline MatrixFile LoadMatrix(const std::filesystem::path &path) {
  return ParseMatrix(internal::ReadWholeFile(path));
}

}  // namespace seedforge

#endif  // SEEDFORGE_CODEC_HPP_
