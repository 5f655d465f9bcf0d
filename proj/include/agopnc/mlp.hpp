#pragma once

// Biasless ReLU multilayer perceptron trained with minibatch SGD on mean
// squared error, plus the layerwise machinery the feature-learning study
// needs: exact backpropagated gradients, per-layer input-output Jacobians,
// the network's averaged gradient outer product at a layer, and its Pearson
// correlation with the layer's weight Gram matrix.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "agopnc/dataset.hpp"
#include "agopnc/linalg.hpp"
#include "agopnc/matrix.hpp"
#include "agopnc/rng.hpp"
#include "agopnc/runtime.hpp"

namespace agopnc {

struct MlpModel {
  std::vector<Mat> weights;  // weights[i]: widths[i+1] x widths[i]
  std::vector<int> widths;
  double init_scale = 0.3;
};

inline int hidden_layer_count(const MlpModel& model) {
  return static_cast<int>(model.weights.size()) - 1;
}

// hidden layers draw i.i.d. normals at init_scale over the square root of
// fan-in; the linear readout stays at the plain fan-in baseline
inline MlpModel mlp_init(const std::vector<int>& widths, double init_scale,
                         std::uint64_t seed) {
  if (widths.size() < 2)
    throw std::invalid_argument("mlp_init: need input and output widths");
  for (int w : widths)
    if (w < 1) throw std::invalid_argument("mlp_init: widths must be >= 1");
  if (!(init_scale >= 0.0))
    throw std::invalid_argument("mlp_init: init scale must be >= 0");

  MlpModel model;
  model.widths = widths;
  model.init_scale = init_scale;
  Rng rng(seed);
  const std::size_t layers = widths.size() - 1;
  for (std::size_t i = 0; i < layers; ++i) {
    const double scale = i + 1 < layers ? init_scale : 1.0;
    const double stddev = scale / std::sqrt(static_cast<double>(widths[i]));
    model.weights.push_back(
        gaussian_matrix(widths[i + 1], widths[i], rng, stddev));
  }
  return model;
}

struct MlpForward {
  Mat output;                // readout, K x N
  std::vector<Mat> inputs;   // input to each weight; inputs[0] is the data
  std::vector<Mat> preacts;  // pre-activation of each hidden layer
};

inline MlpForward mlp_forward(const MlpModel& model, const Mat& x) {
  if (model.weights.empty())
    throw std::invalid_argument("mlp_forward: empty model");
  if (x.rows() != model.weights.front().cols())
    throw std::invalid_argument("mlp_forward: input width mismatch");
  MlpForward cache;
  cache.inputs.push_back(x);
  for (std::size_t i = 0; i + 1 < model.weights.size(); ++i) {
    Mat z = model.weights[i] * cache.inputs.back();
    cache.preacts.push_back(z);
    cache.inputs.push_back(z.cwiseMax(0.0));
  }
  cache.output = model.weights.back() * cache.inputs.back();
  return cache;
}

// mean over samples of the squared output residual
inline double mlp_loss(const MlpModel& model, const Mat& x, const Mat& y) {
  const Mat out = mlp_forward(model, x).output;
  if (y.rows() != out.rows() || y.cols() != out.cols())
    throw std::invalid_argument("mlp_loss: label shape mismatch");
  return (out - y).squaredNorm() / static_cast<double>(x.cols());
}

// exact gradients of mlp_loss; the ReLU derivative at exactly zero is zero
inline std::vector<Mat> mlp_grad(const MlpModel& model, const Mat& x,
                                 const Mat& y) {
  const MlpForward cache = mlp_forward(model, x);
  if (y.rows() != cache.output.rows() || y.cols() != cache.output.cols())
    throw std::invalid_argument("mlp_grad: label shape mismatch");
  const double n = static_cast<double>(x.cols());
  std::vector<Mat> grads(model.weights.size());
  Mat upstream = (2.0 / n) * (cache.output - y);
  for (std::size_t i = model.weights.size(); i-- > 0;) {
    grads[i] = upstream * cache.inputs[i].transpose();
    if (i > 0) {
      const Mat mask =
          (cache.preacts[i - 1].array() > 0.0).cast<double>().matrix();
      upstream =
          (model.weights[i].transpose() * upstream).cwiseProduct(mask);
    }
  }
  return grads;
}

// minibatch SGD with a deterministic per-epoch shuffle; records the
// full-data loss before training and after every epoch, aborting if the
// loss explodes past a million times its starting value; on_epoch (when
// given) observes the model after each completed epoch
inline std::vector<double> sgd_train(
    MlpModel& model, const Mat& x, const Mat& y, double lr, int epochs,
    int batch_size, std::uint64_t seed,
    const std::function<void(int, const MlpModel&, double)>& on_epoch = {}) {
  if (!(lr >= 0.0))
    throw std::invalid_argument("sgd_train: learning rate must be >= 0");
  if (epochs < 0) throw std::invalid_argument("sgd_train: epochs must be >= 0");
  if (batch_size < 1)
    throw std::invalid_argument("sgd_train: batch size must be >= 1");
  const int n = static_cast<int>(x.cols());
  if (n < 1) throw std::invalid_argument("sgd_train: no samples");

  std::vector<double> history;
  history.push_back(mlp_loss(model, x, y));
  Rng rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    for (int start = 0; start < n; start += batch_size) {
      const int count = std::min(batch_size, n - start);
      Mat xb(x.rows(), count);
      Mat yb(y.rows(), count);
      for (int j = 0; j < count; ++j) {
        const int src = order[static_cast<std::size_t>(start + j)];
        xb.col(j) = x.col(src);
        yb.col(j) = y.col(src);
      }
      const auto grads = mlp_grad(model, xb, yb);
      for (std::size_t i = 0; i < model.weights.size(); ++i)
        model.weights[i] -= lr * grads[i];
    }
    const double loss = mlp_loss(model, x, y);
    history.push_back(loss);
    if (!std::isfinite(loss) || loss > 1e6 * history.front())
      throw NumericalError("sgd_train: loss diverged at epoch " +
                           std::to_string(epoch + 1));
    if (on_epoch) on_epoch(epoch + 1, model, loss);
  }
  return history;
}

// transposed Jacobian of the network output with respect to the input of
// layer l (1-based; l = hidden count + 1 addresses the readout): the chain
// of weights with dead ReLU units zeroing their rows
inline Mat layer_jacobian(const MlpModel& model, const Vec& x, int l) {
  const int hidden = hidden_layer_count(model);
  if (l < 1 || l > hidden + 1)
    throw std::invalid_argument("layer_jacobian: layer index out of range");
  const MlpForward cache = mlp_forward(model, x);
  Mat chain = model.weights[static_cast<std::size_t>(l - 1)];
  for (int j = l; j <= hidden; ++j) {
    const Vec mask = (cache.preacts[static_cast<std::size_t>(j - 1)]
                          .col(0)
                          .array() > 0.0)
                         .cast<double>()
                         .matrix();
    chain = model.weights[static_cast<std::size_t>(j)] *
            (mask.asDiagonal() * chain);
  }
  return chain.transpose();
}

struct NetworkAgop {
  Mat m;             // averaged gradient outer product at the layer input
  double rho = 0.0;  // correlation of the weight Gram with sqrt(m)
};

// M_l = (1/N) sum_i J_l(x_i) J_l(x_i)^T over samples, merged in fixed chunk
// order so results are independent of the worker count up to roundoff
inline NetworkAgop network_agop_nfa(const MlpModel& model, const Mat& x,
                                    int l) {
  const int hidden = hidden_layer_count(model);
  if (l < 1 || l > hidden)
    throw std::invalid_argument("network_agop_nfa: need a hidden layer index");
  const int n = static_cast<int>(x.cols());
  if (n < 1) throw std::invalid_argument("network_agop_nfa: no samples");
  const Eigen::Index dl = model.weights[static_cast<std::size_t>(l - 1)].cols();

  const std::size_t chunks = chunk_count(n);
  std::vector<Mat> partial(chunks, Mat::Zero(dl, dl));
  parallel_chunks(n, [&](std::size_t chunk, int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const Mat j = layer_jacobian(model, x.col(i), l);
      partial[chunk].noalias() += j * j.transpose();
    }
  });
  NetworkAgop result;
  result.m = Mat::Zero(dl, dl);
  for (const Mat& p : partial) result.m += p;
  result.m /= static_cast<double>(n);
  result.m = ((result.m + result.m.transpose()) / 2.0).eval();

  const Mat& w = model.weights[static_cast<std::size_t>(l - 1)];
  result.rho = pearson_flat(w.transpose() * w, psd_sqrt(result.m));
  return result;
}

}  // namespace agopnc
