// Copyright 2026 The Risekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "risekit/encoder.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace risekit {
namespace {

constexpr char kMagic[8] = {'R', 'I', 'S', 'E', 'K', 'I', 'T', '1'};
constexpr uint32_t kFormatVersion = 1;

static_assert(sizeof(float) == 4, "checkpoint payload assumes 32-bit floats");

template <typename T>
void write_le(std::string& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& path, std::string data) : path_(path), data_(std::move(data)) {}

  template <typename T>
  T read_le(const char* what) {
    if (pos_ + sizeof(T) > data_.size())
      throw std::runtime_error(path_ + ": truncated header (" + what + ")");
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string read_bytes(size_t n, const char* what) {
    if (pos_ + n > data_.size()) throw std::runtime_error(path_ + ": truncated header (" + what + ")");
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  void read_matrix(MatrixX<float>& m, Eigen::Index rows, Eigen::Index cols) {
    const size_t bytes = static_cast<size_t>(rows) * static_cast<size_t>(cols) * sizeof(float);
    if (pos_ + bytes > data_.size()) throw std::runtime_error(path_ + ": truncated payload");
    m.resize(rows, cols);
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(m.data(), data_.data() + pos_, bytes);
      pos_ += bytes;
    } else {
      for (Eigen::Index i = 0; i < rows * cols; ++i) {
        unsigned char b[4];
        std::memcpy(b, data_.data() + pos_, 4);
        std::reverse(b, b + 4);
        std::memcpy(m.data() + i, b, 4);
        pos_ += 4;
      }
    }
  }

  void expect_end() {
    if (pos_ != data_.size()) throw std::runtime_error(path_ + ": trailing bytes after payload");
  }

 private:
  const std::string& path_;
  std::string data_;
  size_t pos_ = 0;
};

void append_matrix(std::string& out, const MatrixX<float>& m) {
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(m.data()), static_cast<size_t>(m.size()) * sizeof(float));
  } else {
    for (Eigen::Index i = 0; i < m.size(); ++i) write_le(out, m.data()[i]);
  }
}

void check_finite(const MatrixX<float>& m, const std::string& path, const char* what) {
  if (!m.allFinite()) throw std::runtime_error(path + ": non-finite values in " + what);
}

}  // namespace

EncoderParams init_params(int vocab_size, int dim, uint64_t seed, bool shared_towers) {
  if (vocab_size < 3) throw std::invalid_argument("init_params: vocab_size must be >= 3");
  if (dim < 2) throw std::invalid_argument("init_params: dim must be >= 2");

  SeededRng rng(seed);
  const auto fill_tower = [&](TowerParamsT<float>& tp) {
    tp.embedding.resize(vocab_size, dim);
    for (Eigen::Index r = 0; r < tp.embedding.rows(); ++r) {
      for (Eigen::Index c = 0; c < tp.embedding.cols(); ++c) {
        tp.embedding(r, c) = static_cast<float>(-0.05 + 0.1 * rng.next_double());
      }
    }
    tp.projection = MatrixX<float>::Identity(dim, dim);
  };

  EncoderParams params;
  params.shared_towers = shared_towers;
  fill_tower(params.document);
  if (!shared_towers) {
    params.summary.emplace();
    fill_tower(*params.summary);
  }
  return params;
}

void save_checkpoint(const EncoderParams& params, const std::string& path) {
  std::string blob;
  blob.append(kMagic, sizeof(kMagic));
  write_le(blob, kFormatVersion);
  write_le(blob, static_cast<uint32_t>(params.vocab_size()));
  write_le(blob, static_cast<uint32_t>(params.dim()));
  write_le(blob, static_cast<uint8_t>(params.shared_towers ? 1 : 0));
  write_le(blob, params.vocab_hash);
  write_le(blob, static_cast<uint32_t>(params.config_echo.size()));
  blob += params.config_echo;
  append_matrix(blob, params.document.embedding);
  append_matrix(blob, params.document.projection);
  if (!params.shared_towers) {
    if (!params.summary) throw std::invalid_argument("save_checkpoint: separate towers without summary parameters");
    append_matrix(blob, params.summary->embedding);
    append_matrix(blob, params.summary->projection);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

EncoderParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Reader reader(path, std::move(data));
  const std::string magic = reader.read_bytes(sizeof(kMagic), "magic");
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error(path + ": not a RISEKIT1 checkpoint");
  const uint32_t version = reader.read_le<uint32_t>("version");
  if (version != kFormatVersion)
    throw std::runtime_error(path + ": unsupported format version " + std::to_string(version));
  const uint32_t vocab_size = reader.read_le<uint32_t>("vocab_size");
  const uint32_t dim = reader.read_le<uint32_t>("dim");
  const uint8_t shared = reader.read_le<uint8_t>("shared flag");
  if (shared > 1) throw std::runtime_error(path + ": invalid shared-towers flag");
  if (vocab_size < 3 || dim < 2) throw std::runtime_error(path + ": invalid dimensions in header");

  EncoderParams params;
  params.shared_towers = shared == 1;
  params.vocab_hash = reader.read_le<uint64_t>("vocab hash");
  const uint32_t echo_len = reader.read_le<uint32_t>("config echo length");
  params.config_echo = reader.read_bytes(echo_len, "config echo");

  reader.read_matrix(params.document.embedding, vocab_size, dim);
  reader.read_matrix(params.document.projection, dim, dim);
  if (!params.shared_towers) {
    params.summary.emplace();
    reader.read_matrix(params.summary->embedding, vocab_size, dim);
    reader.read_matrix(params.summary->projection, dim, dim);
  }
  reader.expect_end();

  check_finite(params.document.embedding, path, "document embedding");
  check_finite(params.document.projection, path, "document projection");
  if (params.summary) {
    check_finite(params.summary->embedding, path, "summary embedding");
    check_finite(params.summary->projection, path, "summary projection");
  }
  return params;
}

EncoderParams load_checkpoint(const std::string& path, uint64_t expected_vocab_hash) {
  EncoderParams params = load_checkpoint(path);
  if (params.vocab_hash != expected_vocab_hash) {
    throw std::runtime_error(path + ": vocabulary hash mismatch (checkpoint " +
                             std::to_string(params.vocab_hash) + ", vocabulary " +
                             std::to_string(expected_vocab_hash) + ")");
  }
  return params;
}

}  // namespace risekit
