#include "dynaug/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace dynaug::nn {

// ---------------------------------------------------------------------------
// Conv1d

Conv1d::Conv1d(int in_channels, int out_channels, int kernel)
    : in_ch_(in_channels), out_ch_(out_channels), k_(kernel), pad_((kernel - 1) / 2) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw std::invalid_argument("Conv1d: kernel must be odd and positive");
  }
  weight = Matrix::Zero(out_ch_, static_cast<Eigen::Index>(k_) * in_ch_);
  bias = Matrix::Zero(out_ch_, 1);
  wgrad = Matrix::Zero(weight.rows(), weight.cols());
  bgrad = Matrix::Zero(bias.rows(), 1);
}

Matrix Conv1d::im2col(const SeqBatch& x) const {
  const int t = x.time;
  Matrix cols = Matrix::Zero(static_cast<Eigen::Index>(k_) * in_ch_,
                             static_cast<Eigen::Index>(x.batch) * t);
  for (int b = 0; b < x.batch; ++b) {
    const Eigen::Index base = static_cast<Eigen::Index>(b) * t;
    for (int j = 0; j < k_; ++j) {
      // Output position range where input index t + j - pad stays in bounds.
      const int lo = std::max(0, pad_ - j);
      const int hi = std::min(t, t + pad_ - j);
      if (hi <= lo) continue;
      cols.block(static_cast<Eigen::Index>(j) * in_ch_, base + lo, in_ch_, hi - lo) =
          x.data.block(0, base + lo + j - pad_, in_ch_, hi - lo);
    }
  }
  return cols;
}

SeqBatch Conv1d::forward_train(const SeqBatch& x) {
  if (x.channels() != in_ch_) {
    throw std::invalid_argument("Conv1d: input channel mismatch");
  }
  cols_ = im2col(x);
  cached_batch_ = x.batch;
  cached_time_ = x.time;
  SeqBatch y;
  y.batch = x.batch;
  y.time = x.time;
  y.data.noalias() = weight * cols_;
  y.data.colwise() += bias.col(0);
  return y;
}

SeqBatch Conv1d::forward_eval(const SeqBatch& x) const {
  if (x.channels() != in_ch_) {
    throw std::invalid_argument("Conv1d: input channel mismatch");
  }
  SeqBatch y;
  y.batch = x.batch;
  y.time = x.time;
  y.data.noalias() = weight * im2col(x);
  y.data.colwise() += bias.col(0);
  return y;
}

SeqBatch Conv1d::backward(const SeqBatch& dy, bool need_input_grad) {
  wgrad.noalias() += dy.data * cols_.transpose();
  bgrad.col(0).noalias() += dy.data.rowwise().sum();
  if (!need_input_grad) {
    return SeqBatch{};
  }
  const Matrix dcols = weight.transpose() * dy.data;
  const int t = cached_time_;
  SeqBatch dx = SeqBatch::zeros(in_ch_, cached_batch_, t);
  for (int b = 0; b < cached_batch_; ++b) {
    const Eigen::Index base = static_cast<Eigen::Index>(b) * t;
    for (int j = 0; j < k_; ++j) {
      const int lo = std::max(0, pad_ - j);
      const int hi = std::min(t, t + pad_ - j);
      if (hi <= lo) continue;
      dx.data.block(0, base + lo + j - pad_, in_ch_, hi - lo) +=
          dcols.block(static_cast<Eigen::Index>(j) * in_ch_, base + lo, in_ch_, hi - lo);
    }
  }
  return dx;
}

void Conv1d::init(RngStream& rng) {
  const double limit = std::sqrt(6.0 / (static_cast<double>(in_ch_) * k_));
  for (Eigen::Index i = 0; i < weight.size(); ++i) {
    weight.data()[i] = rng.uniform(-limit, limit);
  }
  bias.setZero();
}

void Conv1d::collect(const std::string& prefix, std::vector<ParamTensor>& out) {
  out.push_back({prefix + ".weight", &weight, &wgrad});
  out.push_back({prefix + ".bias", &bias, &bgrad});
}

// ---------------------------------------------------------------------------
// BatchNorm1d

BatchNorm1d::BatchNorm1d(int channels, double momentum, double eps)
    : channels_(channels), momentum_(momentum), eps_(eps) {
  gamma = Matrix::Ones(channels, 1);
  beta = Matrix::Zero(channels, 1);
  ggrad = Matrix::Zero(channels, 1);
  bgrad = Matrix::Zero(channels, 1);
  running_mean = Matrix::Zero(channels, 1);
  running_var = Matrix::Ones(channels, 1);
}

SeqBatch BatchNorm1d::forward_train(const SeqBatch& x) {
  const Eigen::Index m = x.data.cols();
  const Vector mean = x.data.rowwise().mean();
  const Vector var =
      (x.data.colwise() - mean).array().square().rowwise().mean();
  inv_std_ = (var.array() + eps_).sqrt().inverse();
  xhat_ = (x.data.colwise() - mean).array().colwise() * inv_std_.array();

  running_mean.col(0) = (1.0 - momentum_) * running_mean.col(0) + momentum_ * mean;
  running_var.col(0) = (1.0 - momentum_) * running_var.col(0) + momentum_ * var;

  SeqBatch y;
  y.batch = x.batch;
  y.time = x.time;
  y.data = (xhat_.array().colwise() * gamma.col(0).array()).colwise() +
           beta.col(0).array();
  (void)m;
  return y;
}

SeqBatch BatchNorm1d::forward_eval(const SeqBatch& x) const {
  const Vector inv = (running_var.col(0).array() + eps_).sqrt().inverse();
  SeqBatch y;
  y.batch = x.batch;
  y.time = x.time;
  y.data = (((x.data.colwise() - running_mean.col(0)).array().colwise() * inv.array())
                .colwise() *
            gamma.col(0).array())
               .colwise() +
           beta.col(0).array();
  return y;
}

SeqBatch BatchNorm1d::backward(const SeqBatch& dy) {
  const double m = static_cast<double>(dy.data.cols());
  const Vector sum_dy = dy.data.rowwise().sum();
  const Vector sum_dy_xhat = dy.data.cwiseProduct(xhat_).rowwise().sum();
  ggrad.col(0) += sum_dy_xhat;
  bgrad.col(0) += sum_dy;

  // dx = gamma*inv_std/m * (m*dy - sum(dy) - xhat*sum(dy*xhat))
  const Vector scale = gamma.col(0).cwiseProduct(inv_std_) / m;
  SeqBatch dx;
  dx.batch = dy.batch;
  dx.time = dy.time;
  dx.data = ((m * dy.data).colwise() - sum_dy) -
            (xhat_.array().colwise() * sum_dy_xhat.array()).matrix();
  dx.data = dx.data.array().colwise() * scale.array();
  return dx;
}

void BatchNorm1d::init(RngStream& /*rng*/) {
  gamma.setOnes();
  beta.setZero();
  running_mean.setZero();
  running_var.setOnes();
}

void BatchNorm1d::collect(const std::string& prefix, std::vector<ParamTensor>& out) {
  out.push_back({prefix + ".gamma", &gamma, &ggrad});
  out.push_back({prefix + ".beta", &beta, &bgrad});
}

void BatchNorm1d::collect_buffers(const std::string& prefix,
                                  std::vector<BufferTensor>& out) {
  out.push_back({prefix + ".running_mean", &running_mean});
  out.push_back({prefix + ".running_var", &running_var});
}

// ---------------------------------------------------------------------------
// ReLU

Matrix ReLU::forward_train(const Matrix& x) {
  mask_ = (x.array() > 0.0).cast<double>();
  return x.cwiseMax(0.0);
}

// ---------------------------------------------------------------------------
// MaxPool1d

SeqBatch MaxPool1d::pool(const SeqBatch& x, Eigen::MatrixXi* argmax) const {
  const int t_out = out_time(x.time, size_);
  if (t_out < 1) {
    throw std::invalid_argument("MaxPool1d: sequence too short to pool");
  }
  const int c = x.channels();
  SeqBatch y;
  y.batch = x.batch;
  y.time = t_out;
  y.data.resize(c, static_cast<Eigen::Index>(x.batch) * t_out);
  if (argmax) {
    argmax->resize(c, static_cast<Eigen::Index>(x.batch) * t_out);
  }
  for (int b = 0; b < x.batch; ++b) {
    const Eigen::Index in_base = static_cast<Eigen::Index>(b) * x.time;
    const Eigen::Index out_base = static_cast<Eigen::Index>(b) * t_out;
    for (int to = 0; to < t_out; ++to) {
      const Eigen::Index first = in_base + static_cast<Eigen::Index>(to) * size_;
      for (int ch = 0; ch < c; ++ch) {
        double best = x.data(ch, first);
        Eigen::Index best_col = first;
        for (int s = 1; s < size_; ++s) {
          const double v = x.data(ch, first + s);
          if (v > best) {
            best = v;
            best_col = first + s;
          }
        }
        y.data(ch, out_base + to) = best;
        if (argmax) {
          (*argmax)(ch, out_base + to) = static_cast<int>(best_col);
        }
      }
    }
  }
  return y;
}

SeqBatch MaxPool1d::forward_train(const SeqBatch& x) {
  in_time_ = x.time;
  in_batch_ = x.batch;
  return pool(x, &argmax_);
}

SeqBatch MaxPool1d::forward_eval(const SeqBatch& x) const { return pool(x, nullptr); }

SeqBatch MaxPool1d::backward(const SeqBatch& dy) const {
  SeqBatch dx = SeqBatch::zeros(dy.channels(), in_batch_, in_time_);
  for (Eigen::Index col = 0; col < dy.data.cols(); ++col) {
    for (int ch = 0; ch < dy.channels(); ++ch) {
      dx.data(ch, argmax_(ch, col)) += dy.data(ch, col);
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Dense

Dense::Dense(int in_dim, int out_dim) {
  weight = Matrix::Zero(out_dim, in_dim);
  bias = Matrix::Zero(out_dim, 1);
  wgrad = Matrix::Zero(out_dim, in_dim);
  bgrad = Matrix::Zero(out_dim, 1);
}

Matrix Dense::forward_train(const Matrix& x) {
  if (x.rows() != weight.cols()) {
    throw std::invalid_argument("Dense: input dim mismatch");
  }
  x_ = x;
  Matrix y = weight * x;
  y.colwise() += bias.col(0);
  return y;
}

Matrix Dense::forward_eval(const Matrix& x) const {
  if (x.rows() != weight.cols()) {
    throw std::invalid_argument("Dense: input dim mismatch");
  }
  Matrix y = weight * x;
  y.colwise() += bias.col(0);
  return y;
}

Matrix Dense::backward(const Matrix& dy, bool need_input_grad) {
  wgrad.noalias() += dy * x_.transpose();
  bgrad.col(0).noalias() += dy.rowwise().sum();
  if (!need_input_grad) {
    return Matrix();
  }
  return weight.transpose() * dy;
}

void Dense::init(RngStream& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(weight.cols()));
  for (Eigen::Index i = 0; i < weight.size(); ++i) {
    weight.data()[i] = rng.uniform(-limit, limit);
  }
  bias.setZero();
}

void Dense::collect(const std::string& prefix, std::vector<ParamTensor>& out) {
  out.push_back({prefix + ".weight", &weight, &wgrad});
  out.push_back({prefix + ".bias", &bias, &bgrad});
}

// ---------------------------------------------------------------------------
// Reshaping and softmax

Matrix flatten(const SeqBatch& x) {
  const int c = x.channels();
  Matrix out(static_cast<Eigen::Index>(c) * x.time, x.batch);
  for (int b = 0; b < x.batch; ++b) {
    for (int ch = 0; ch < c; ++ch) {
      out.col(b).segment(static_cast<Eigen::Index>(ch) * x.time, x.time) =
          x.data.row(ch).segment(static_cast<Eigen::Index>(b) * x.time, x.time);
    }
  }
  return out;
}

SeqBatch unflatten(const Matrix& d, int channels, int batch, int time) {
  SeqBatch out;
  out.batch = batch;
  out.time = time;
  out.data.resize(channels, static_cast<Eigen::Index>(batch) * time);
  for (int b = 0; b < batch; ++b) {
    for (int ch = 0; ch < channels; ++ch) {
      out.data.row(ch).segment(static_cast<Eigen::Index>(b) * time, time) =
          d.col(b).segment(static_cast<Eigen::Index>(ch) * time, time);
    }
  }
  return out;
}

Matrix softmax_columns(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double mx = logits.col(c).maxCoeff();
    out.col(c) = (logits.col(c).array() - mx).exp();
    out.col(c) /= out.col(c).sum();
  }
  return out;
}

Vector softmax(const Vector& logits) {
  const double mx = logits.maxCoeff();
  Vector out = (logits.array() - mx).exp();
  return out / out.sum();
}

}  // namespace dynaug::nn
