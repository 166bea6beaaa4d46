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

#ifndef RISEKIT_ENCODER_HPP_
#define RISEKIT_ENCODER_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "risekit/rng.hpp"

namespace risekit {

// Row-major so one embedding row is contiguous and the checkpoint payload
// is a straight memory dump.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Tower { kDocument, kSummary };

template <typename Scalar>
struct TowerParamsT {
  MatrixX<Scalar> embedding;   // vocab_size x dim
  MatrixX<Scalar> projection;  // dim x dim
};

// Learnable state of the dual encoder. With shared towers (the default)
// one parameter set serves both sides; otherwise the summary side has its
// own embedding table and projection.
template <typename Scalar>
struct EncoderParamsT {
  TowerParamsT<Scalar> document;
  std::optional<TowerParamsT<Scalar>> summary;
  bool shared_towers = true;
  uint64_t vocab_hash = 0;    // binds checkpoints to a vocabulary
  std::string config_echo;    // free-form training-config note saved in checkpoints

  int vocab_size() const { return static_cast<int>(document.embedding.rows()); }
  int dim() const { return static_cast<int>(document.embedding.cols()); }

  const TowerParamsT<Scalar>& tower(Tower t) const {
    return (t == Tower::kDocument || shared_towers) ? document : *summary;
  }
  TowerParamsT<Scalar>& tower(Tower t) {
    return (t == Tower::kDocument || shared_towers) ? document : *summary;
  }

  template <typename Target>
  EncoderParamsT<Target> cast() const {
    EncoderParamsT<Target> out;
    out.document.embedding = document.embedding.template cast<Target>();
    out.document.projection = document.projection.template cast<Target>();
    if (summary) {
      out.summary.emplace();
      out.summary->embedding = summary->embedding.template cast<Target>();
      out.summary->projection = summary->projection.template cast<Target>();
    }
    out.shared_towers = shared_towers;
    out.vocab_hash = vocab_hash;
    out.config_echo = config_echo;
    return out;
  }
};

using EncoderParams = EncoderParamsT<float>;

// Fresh parameters: embeddings i.i.d. uniform in [-0.05, 0.05] from the
// seeded stream (document tower first, rows in order), projections
// initialized to identity so training starts from plain bag-of-embeddings
// geometry.
EncoderParams init_params(int vocab_size, int dim, uint64_t seed, bool shared_towers);

// Zero-valued parameters with the same shape, used for gradients.
template <typename Scalar>
EncoderParamsT<Scalar> zeros_like(const EncoderParamsT<Scalar>& params) {
  EncoderParamsT<Scalar> out;
  out.document.embedding = MatrixX<Scalar>::Zero(params.document.embedding.rows(), params.document.embedding.cols());
  out.document.projection =
      MatrixX<Scalar>::Zero(params.document.projection.rows(), params.document.projection.cols());
  if (params.summary) {
    out.summary.emplace();
    out.summary->embedding = MatrixX<Scalar>::Zero(params.summary->embedding.rows(), params.summary->embedding.cols());
    out.summary->projection =
        MatrixX<Scalar>::Zero(params.summary->projection.rows(), params.summary->projection.cols());
  }
  out.shared_towers = params.shared_towers;
  return out;
}

// Text encoding: unit-normalized projection of the mean embedding row.
// Reductions accumulate in double regardless of the parameter scalar.
// Throws on empty input, out-of-range ids, and a zero-norm projection.
template <typename Scalar>
VectorX<Scalar> embed_text(const EncoderParamsT<Scalar>& params, std::span<const int> token_ids, Tower tower) {
  if (token_ids.empty()) throw std::invalid_argument("embed_text: empty input");
  const TowerParamsT<Scalar>& tp = params.tower(tower);
  const int vocab_size = static_cast<int>(tp.embedding.rows());
  const int dim = static_cast<int>(tp.embedding.cols());

  VectorX<double> mean = VectorX<double>::Zero(dim);
  for (int id : token_ids) {
    if (id < 0 || id >= vocab_size)
      throw std::out_of_range("embed_text: token id " + std::to_string(id) + " out of range [0, " +
                              std::to_string(vocab_size) + ")");
    mean += tp.embedding.row(id).transpose().template cast<double>();
  }
  mean /= static_cast<double>(token_ids.size());

  VectorX<double> projected = tp.projection.template cast<double>() * mean;
  const double norm = projected.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::runtime_error("embed_text: zero-norm or non-finite encoding");
  projected /= norm;
  return projected.template cast<Scalar>();
}

// Cosine similarity of two unit vectors: a sequentially-accumulated
// double dot product, clamped to [-1, 1]. Inputs whose norm deviates from
// 1 by more than 1e-4 are rejected.
template <typename Scalar>
double similarity(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("similarity: dimension mismatch");
  double norm_a = 0.0, norm_b = 0.0, dot = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]);
    const double y = static_cast<double>(b[i]);
    norm_a += x * x;
    norm_b += y * y;
    dot += x * y;
  }
  if (std::abs(std::sqrt(norm_a) - 1.0) > 1e-4 || std::abs(std::sqrt(norm_b) - 1.0) > 1e-4)
    throw std::invalid_argument("similarity: inputs must be unit vectors");
  return std::clamp(dot, -1.0, 1.0);
}

// Binary checkpoint: magic "RISEKIT1", a fixed header (version,
// vocab_size, dim, shared flag, vocab hash, config echo), then the
// float32 little-endian row-major payload: document embedding, document
// projection, and for separate towers the summary pair. Loading verifies
// sizes exactly and rejects truncated or oversized files without
// returning partial state.
void save_checkpoint(const EncoderParams& params, const std::string& path);
EncoderParams load_checkpoint(const std::string& path);
// Same, but also requires the stored vocabulary hash to match.
EncoderParams load_checkpoint(const std::string& path, uint64_t expected_vocab_hash);

}  // namespace risekit

#endif  // RISEKIT_ENCODER_HPP_
