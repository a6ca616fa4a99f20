#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dynaug/rng.hpp"
#include "dynaug/series.hpp"

namespace dynaug::nn {

/// A batch of fixed-length sequences stored as one matrix: channels on the
/// rows, samples laid side by side on the columns (column index b*time + t).
/// This keeps convolutions expressible as single large GEMMs.
struct SeqBatch {
  Matrix data;  // C x (batch*time)
  int batch = 0;
  int time = 0;

  int channels() const { return static_cast<int>(data.rows()); }

  static SeqBatch zeros(int channels, int batch, int time) {
    return SeqBatch{Matrix::Zero(channels, static_cast<Eigen::Index>(batch) * time),
                    batch, time};
  }
};

/// Named view into one trainable tensor; grads accumulate into *grad.
struct ParamTensor {
  std::string name;
  Matrix* value;
  Matrix* grad;
};

/// Non-trainable state (batch-norm running statistics).
struct BufferTensor {
  std::string name;
  Matrix* value;
};

/// 1D convolution, stride 1, zero same-padding, odd kernel. Implemented as
/// im2col + GEMM; the column matrix is cached in training mode for backward.
class Conv1d {
 public:
  Conv1d(int in_channels, int out_channels, int kernel);

  SeqBatch forward_train(const SeqBatch& x);
  SeqBatch forward_eval(const SeqBatch& x) const;
  /// Accumulates weight/bias grads; returns the input grad unless skipped.
  SeqBatch backward(const SeqBatch& dy, bool need_input_grad = true);

  void init(RngStream& rng);
  void collect(const std::string& prefix, std::vector<ParamTensor>& out);

  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }

  Matrix weight;  // out_ch x (kernel*in_ch), row-block j holds kernel offset j
  Matrix bias;    // out_ch x 1
  Matrix wgrad, bgrad;

 private:
  Matrix im2col(const SeqBatch& x) const;

  int in_ch_, out_ch_, k_, pad_;
  Matrix cols_;  // cached im2col of the last training forward
  int cached_batch_ = 0, cached_time_ = 0;
};

/// Per-channel batch normalization over every (sample, position) pair.
/// Training mode normalizes with batch statistics and updates the running
/// estimates; eval mode uses the running estimates.
class BatchNorm1d {
 public:
  explicit BatchNorm1d(int channels, double momentum = 0.1, double eps = 1e-5);

  SeqBatch forward_train(const SeqBatch& x);
  SeqBatch forward_eval(const SeqBatch& x) const;
  SeqBatch backward(const SeqBatch& dy);

  void init(RngStream& rng);
  void collect(const std::string& prefix, std::vector<ParamTensor>& out);
  void collect_buffers(const std::string& prefix, std::vector<BufferTensor>& out);

  Matrix gamma, beta, ggrad, bgrad;      // C x 1
  Matrix running_mean, running_var;      // C x 1

 private:
  int channels_;
  double momentum_, eps_;
  Matrix xhat_;      // cached normalized input
  Vector inv_std_;   // cached 1/sqrt(var+eps)
};

/// Elementwise max(0, x) with a cached mask for backward.
class ReLU {
 public:
  Matrix forward_train(const Matrix& x);
  Matrix forward_eval(const Matrix& x) const { return x.cwiseMax(0.0); }
  Matrix backward(const Matrix& dy) const { return dy.cwiseProduct(mask_); }

 private:
  Matrix mask_;
};

/// Non-overlapping max pooling along time; trailing remainder is dropped.
class MaxPool1d {
 public:
  explicit MaxPool1d(int size = 2) : size_(size) {}

  SeqBatch forward_train(const SeqBatch& x);
  SeqBatch forward_eval(const SeqBatch& x) const;
  SeqBatch backward(const SeqBatch& dy) const;

  static int out_time(int time, int size) { return time / size; }

 private:
  SeqBatch pool(const SeqBatch& x, Eigen::MatrixXi* argmax) const;

  int size_;
  Eigen::MatrixXi argmax_;  // input column index per (channel, pooled column)
  int in_time_ = 0, in_batch_ = 0;
};

/// Fully connected layer on feature matrices [dim x batch].
class Dense {
 public:
  Dense(int in_dim, int out_dim);

  Matrix forward_train(const Matrix& x);
  Matrix forward_eval(const Matrix& x) const;
  Matrix backward(const Matrix& dy, bool need_input_grad = true);

  void init(RngStream& rng);
  void collect(const std::string& prefix, std::vector<ParamTensor>& out);

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }

  Matrix weight;  // out x in
  Matrix bias;    // out x 1
  Matrix wgrad, bgrad;

 private:
  Matrix x_;  // cached input
};

/// [C x B*T] sequence batch -> [C*T x B] feature matrix, feature index c*T + t.
Matrix flatten(const SeqBatch& x);
SeqBatch unflatten(const Matrix& d, int channels, int batch, int time);

/// Numerically stable per-column softmax.
Matrix softmax_columns(const Matrix& logits);
Vector softmax(const Vector& logits);

}  // namespace dynaug::nn
