#pragma once

// Neural-collapse diagnostics: within/between-class scatter statistics, the
// NC1 variability ratio, NC2 distances of class-mean geometry to the simplex
// ETF and to orthonormality, normalized centered Gram matrices, and a staged
// NC1 decomposition of a linear map through its SVD.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "agopnc/dataset.hpp"
#include "agopnc/linalg.hpp"
#include "agopnc/matrix.hpp"

namespace agopnc {

struct ClassStats {
  Mat means;        // d x K class means
  Vec global_mean;  // mean of the class means (class-balanced)
  Mat sigma_w;      // within-class scatter, averaged over all samples
  Mat sigma_b;      // between-class scatter, averaged over classes
};

inline ClassStats class_stats(const Mat& x, const std::vector<int>& labels,
                              int k) {
  ensure_nonempty(x, "class_stats");
  if (static_cast<Eigen::Index>(labels.size()) != x.cols())
    throw std::invalid_argument("class_stats: label count must match samples");
  const std::vector<int> counts = class_counts(labels, k);
  for (int c = 0; c < k; ++c)
    if (counts[c] == 0)
      throw std::invalid_argument("class_stats: class " + std::to_string(c) +
                                  " has no samples");

  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  ClassStats stats;
  stats.means = Mat::Zero(d, k);
  for (Eigen::Index i = 0; i < n; ++i)
    stats.means.col(labels[static_cast<std::size_t>(i)]) += x.col(i);
  for (int c = 0; c < k; ++c) stats.means.col(c) /= counts[c];

  stats.global_mean = stats.means.rowwise().mean();

  stats.sigma_w = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec dev = x.col(i) - stats.means.col(labels[static_cast<std::size_t>(i)]);
    stats.sigma_w.noalias() += dev * dev.transpose();
  }
  stats.sigma_w /= static_cast<double>(n);

  stats.sigma_b = Mat::Zero(d, d);
  for (int c = 0; c < k; ++c) {
    const Vec dev = stats.means.col(c) - stats.global_mean;
    stats.sigma_b.noalias() += dev * dev.transpose();
  }
  stats.sigma_b /= static_cast<double>(k);
  return stats;
}

inline double nc1(const ClassStats& stats) {
  const double tb = stats.sigma_b.trace();
  if (!(tb > 1e-14))
    throw std::invalid_argument("nc1: degenerate between-class variability");
  return stats.sigma_w.trace() / tb;
}

// Gram matrix of a K-class simplex equiangular tight frame.
inline Mat etf_gram(int k) {
  if (k < 2) throw std::invalid_argument("etf_gram: need at least 2 classes");
  const double off = 1.0 / (k - 1);
  return (1.0 + off) * Mat::Identity(k, k) - off * Mat::Ones(k, k);
}

struct Nc2 {
  double etf;   // Frobenius distance of the mean-direction Gram to the ETF
  double orth;  // Frobenius distance to the identity after diagonal rescaling
};

inline Nc2 nc2(const ClassStats& stats) {
  const int k = static_cast<int>(stats.means.cols());
  if (k < 2) throw std::invalid_argument("nc2: need at least 2 classes");
  Mat dirs = stats.means.colwise() - stats.global_mean;
  for (int c = 0; c < k; ++c) {
    const double norm = dirs.col(c).norm();
    if (!(norm > 1e-14))
      throw std::invalid_argument("nc2: degenerate centered class mean");
    dirs.col(c) /= norm;
  }
  const Mat gram = dirs.transpose() * dirs;
  Nc2 result;
  result.etf = (gram - etf_gram(k)).norm();
  const double diag_mean = gram.trace() / k;
  result.orth = (gram / diag_mean - Mat::Identity(k, k)).norm();
  return result;
}

// Inner products of all sample pairs after removing the class-balanced global
// mean and normalizing each sample; the diagonal is pinned exactly to 1.
inline Mat centered_gram(const Mat& x, const std::vector<int>& labels, int k) {
  Mat centered = center_global(x, labels, k, GlobalMean::ClassBalanced);
  const Eigen::Index n = centered.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = centered.col(i).norm();
    if (!(norm > 1e-12))
      throw NumericalError("centered_gram: sample " + std::to_string(i) +
                           " coincides with the global mean");
    centered.col(i) /= norm;
  }
  Mat gram = centered.transpose() * centered;
  gram = ((gram + gram.transpose()) / 2.0).eval();
  gram.diagonal().setOnes();
  return gram;
}

struct CollapseMetrics {
  double nc1;
  double nc2_etf;
  double nc2_orth;
  double gram_residual;
};

// Relative Frobenius distance of the centered Gram to the ideal collapsed
// pattern: 1 within a class, -1/(K-1) across classes.
inline double gram_block_residual(const Mat& gram,
                                  const std::vector<int>& labels, int k) {
  const Eigen::Index n = gram.rows();
  const double off = -1.0 / (k - 1);
  double dist2 = 0.0;
  double ref2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double want = labels[static_cast<std::size_t>(i)] ==
                                  labels[static_cast<std::size_t>(j)]
                              ? 1.0
                              : off;
      const double delta = gram(i, j) - want;
      dist2 += delta * delta;
      ref2 += want * want;
    }
  }
  return std::sqrt(dist2 / ref2);
}

inline CollapseMetrics collapse_metrics(const Mat& x,
                                        const std::vector<int>& labels,
                                        int k) {
  const ClassStats stats = class_stats(x, labels, k);
  const Nc2 pair = nc2(stats);
  CollapseMetrics m;
  m.nc1 = nc1(stats);
  m.nc2_etf = pair.etf;
  m.nc2_orth = pair.orth;
  m.gram_residual = gram_block_residual(centered_gram(x, labels, k), labels, k);
  return m;
}

inline double relu_scalar(double v) { return v > 0.0 ? v : 0.0; }

struct SvdStageReport {
  double nc1_input;  // raw inputs
  double nc1_svt;    // singular values times right singular vectors
  double nc1_full;   // full linear map
  double nc1_phi;    // nonlinearity applied after the full map
};

// NC1 after each stage of x -> phi(Wx), factoring W = U S V^T. The U factor
// is an isometry on the row space, so the S V^T stage and the full map agree.
inline SvdStageReport svd_stage_nc1(
    const Mat& xin, const Mat& w, const std::vector<int>& labels, int k,
    const std::function<double(double)>& nonlinearity = relu_scalar) {
  if (w.cols() != xin.rows())
    throw std::invalid_argument("svd_stage_nc1: map width must match inputs");
  Eigen::BDCSVD<Mat> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Mat svt =
      svd.singularValues().asDiagonal() * (svd.matrixV().transpose() * xin);
  const Mat full = w * xin;
  const Mat phi = full.unaryExpr(nonlinearity);

  SvdStageReport report;
  report.nc1_input = nc1(class_stats(xin, labels, k));
  report.nc1_svt = nc1(class_stats(svt, labels, k));
  report.nc1_full = nc1(class_stats(full, labels, k));
  report.nc1_phi = nc1(class_stats(phi, labels, k));
  return report;
}

}  // namespace agopnc
