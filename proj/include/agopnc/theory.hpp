#pragma once

// Gram-space analysis of recursive feature learning on balanced labels: the
// per-layer Gram update and its contraction toward the label Gram, the closed
// form for the fixed-point matrix inverse, the relaxed kernel-regression
// objective, and a randomized search certifying that the block-ones kernel
// maximizes the conditional objective over feasible kernels.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "agopnc/dataset.hpp"
#include "agopnc/linalg.hpp"
#include "agopnc/matrix.hpp"
#include "agopnc/rng.hpp"
#include "agopnc/runtime.hpp"

namespace agopnc {

struct TheoryConfig {
  double lambda_hat = 1e-3;  // ridge of the fitted kernel
  double lambda_map = 1.0;   // ridge added by the feature map
  int n = 20;                // samples per class
  int k = 4;                 // classes
  int depth = 15;            // recursion layers
  double epsilon = 0.05;     // required geometric contraction margin
  double lambda_phi = 0.0;   // feature-map ridge share (reported only)
  std::uint64_t seed = 0;
};

inline void validate_theory_config(const TheoryConfig& cfg) {
  if (!(cfg.lambda_hat >= 0.0))
    throw std::invalid_argument("theory config: fit ridge must be >= 0");
  if (!(cfg.lambda_map > 0.0))
    throw std::invalid_argument("theory config: map ridge must be > 0");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0))
    throw std::invalid_argument("theory config: epsilon must be in (0, 1]");
  if (cfg.n < 1) throw std::invalid_argument("theory config: n must be >= 1");
  if (cfg.k < 2)
    throw std::invalid_argument("theory config: need at least 2 classes");
  if (cfg.depth < 2)
    throw std::invalid_argument("theory config: depth must be >= 2");
  if (!(cfg.lambda_phi >= 0.0))
    throw std::invalid_argument("theory config: phi ridge must be >= 0");
}

// class-sorted balanced labels: n copies of 0, then n copies of 1, ...
inline std::vector<int> balanced_labels(int k, int n) {
  if (k < 1 || n < 1)
    throw std::invalid_argument("balanced_labels: k and n must be positive");
  std::vector<int> labels(static_cast<std::size_t>(k) * n);
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(c) * n + i] = c;
  return labels;
}

// Y^T Y for balanced sorted zero-one labels: block-diagonal all-ones blocks
inline Mat balanced_label_gram(int k, int n) {
  Mat g = Mat::Zero(static_cast<Eigen::Index>(k) * n,
                    static_cast<Eigen::Index>(k) * n);
  for (int c = 0; c < k; ++c)
    g.block(static_cast<Eigen::Index>(c) * n, static_cast<Eigen::Index>(c) * n,
            n, n)
        .setOnes();
  return g;
}

inline double contraction_kappa(double lambda_hat, double lambda_map) {
  return 1.0 - 2.0 * lambda_hat * (1.0 + 1.0 / lambda_map);
}

namespace detail {

// requires zero-one entries, one label per sample, equally sized classes
inline int balanced_samples_per_class(const Mat& y) {
  const Eigen::Index k = y.rows();
  const Eigen::Index n_total = y.cols();
  if (k < 1 || n_total < 1 || n_total % k != 0)
    throw std::invalid_argument("labels: need balanced classes");
  for (Eigen::Index j = 0; j < n_total; ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = y(i, j);
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("labels: entries must be zero or one");
      sum += v;
    }
    if (sum != 1.0)
      throw std::invalid_argument("labels: each sample needs exactly one class");
  }
  const double per = static_cast<double>(n_total) / k;
  for (Eigen::Index i = 0; i < k; ++i)
    if (y.row(i).sum() != per)
      throw std::invalid_argument("labels: classes must be equally sized");
  return static_cast<int>(per);
}

}  // namespace detail

struct AsymptoticStep {
  Mat gtilde;    // learned-feature Gram before the map ridge
  Mat gnext;     // Gram entering the next layer
  double kappa;  // contraction coefficient of the update
};

// One layer of the Gram recursion: pull the Gram toward the label Gram
// through the ridge-regularized fit, rescaled so the fixed point sits at the
// label Gram to first order in the fit ridge, then add the map ridge.
inline AsymptoticStep asymptotic_step(const Mat& g, const Mat& y,
                                      double lambda_hat, double lambda_map) {
  if (!(lambda_hat >= 0.0) || !(lambda_map > 0.0))
    throw std::invalid_argument("asymptotic_step: invalid ridges");
  if (y.cols() != g.rows())
    throw std::invalid_argument("asymptotic_step: label width mismatch");
  const int n_per_class = detail::balanced_samples_per_class(y);
  const double kappa = contraction_kappa(lambda_hat, lambda_map);
  if (!(kappa > 0.0))
    throw NumericalError(
        "asymptotic_step: fit ridge too large, contraction coefficient "
        "nonpositive");

  const auto eig = sym_eig(g);
  if (!(eig.values.minCoeff() > 0.0))
    throw std::invalid_argument(
        "asymptotic_step: gram must be positive definite");

  const Eigen::Index n = g.rows();
  const Mat p = y.transpose() * y;
  // x = (G + fit ridge)^{-1} G, so G (G + fit)^{-1} P (G + fit)^{-1} G = x^T P x
  const Mat x =
      spd_solve(g + lambda_hat * Mat::Identity(n, n), g, {0.0}).x;
  // first-order fixed-point normalization: keeps the stationary Gram at the
  // label Gram up to a quadratic-in-ridge remainder
  const double scale = 1.0 - 2.0 * lambda_hat / (n_per_class + lambda_map);
  AsymptoticStep step;
  step.gtilde = (x.transpose() * p * x) / scale;
  step.gtilde = ((step.gtilde + step.gtilde.transpose()) / 2.0).eval();
  step.gnext = step.gtilde + lambda_map * Mat::Identity(n, n);
  step.kappa = kappa;
  return step;
}

struct FixedPoint {
  Mat astar;    // label Gram plus the map ridge
  Mat inverse;  // its closed-form inverse
};

// closed form: (P + lm I)^{-1} = lm^{-1} I - lm^{-1} (lm + n)^{-1} P
inline FixedPoint fixed_point_inverse(int n, int k, double lambda_map) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("fixed_point_inverse: n and k must be >= 1");
  if (!(lambda_map > 0.0))
    throw std::invalid_argument("fixed_point_inverse: map ridge must be > 0");
  const Eigen::Index nn = static_cast<Eigen::Index>(k) * n;
  const Mat p = balanced_label_gram(k, n);
  FixedPoint fp;
  fp.astar = p + lambda_map * Mat::Identity(nn, nn);
  fp.inverse = Mat::Identity(nn, nn) / lambda_map -
               p / (lambda_map * (lambda_map + n));
  return fp;
}

struct ContractionTrace {
  std::vector<double> residual_spectral;   // per layer, vs the label Gram
  std::vector<double> residual_frobenius;  // same distances in Frobenius norm
  std::vector<double> ratios;              // successive spectral residuals
  double kappa = 0.0;
  double plateau_constant = 0.0;  // fitted coefficient of ridge^2 / map^2
  bool lambda_in_regime = false;  // fit ridge small enough for contraction
  bool pass = false;  // geometric decay with a quadratic-plateau allowance
};

inline ContractionTrace contraction_run(const TheoryConfig& cfg,
                                        const Mat& initial_gram) {
  validate_theory_config(cfg);
  const Eigen::Index nn = static_cast<Eigen::Index>(cfg.k) * cfg.n;
  if (initial_gram.rows() != nn || initial_gram.cols() != nn)
    throw std::invalid_argument("contraction_run: gram size mismatch");
  const Mat y = encode_labels(balanced_labels(cfg.k, cfg.n), cfg.k,
                              LabelEncoding::ZeroOne);
  const Mat p = balanced_label_gram(cfg.k, cfg.n);

  ContractionTrace trace;
  trace.kappa = contraction_kappa(cfg.lambda_hat, cfg.lambda_map);
  trace.lambda_in_regime =
      cfg.lambda_hat * 2.0 / cfg.lambda_map * (1.0 + 1.0 / cfg.lambda_map) *
          cfg.n <
      0.5;

  Mat g = initial_gram;
  for (int l = 0; l < cfg.depth; ++l) {
    const auto step = asymptotic_step(g, y, cfg.lambda_hat, cfg.lambda_map);
    const Mat diff = step.gtilde - p;
    trace.residual_spectral.push_back(
        sym_eig(diff).values.cwiseAbs().maxCoeff());
    trace.residual_frobenius.push_back(diff.norm());
    g = step.gnext;
  }
  for (std::size_t i = 0; i + 1 < trace.residual_spectral.size(); ++i) {
    const double prev = trace.residual_spectral[i];
    trace.ratios.push_back(prev > 0.0 ? trace.residual_spectral[i + 1] / prev
                                      : 0.0);
  }

  const double plateau = trace.residual_spectral.back();
  const double quad =
      cfg.lambda_hat * cfg.lambda_hat / (cfg.lambda_map * cfg.lambda_map);
  trace.plateau_constant = quad > 0.0 ? plateau / quad : 0.0;
  // roundoff floor so exact-collapse runs are not judged on noise
  const double floor = 1e-12 * p.norm();
  trace.pass = true;
  for (std::size_t i = 1; i + 1 < trace.residual_spectral.size(); ++i) {
    const double allowed = (1.0 - cfg.epsilon) * trace.residual_spectral[i] +
                           trace.plateau_constant * quad + floor;
    if (trace.residual_spectral[i + 1] > allowed) {
      trace.pass = false;
      break;
    }
  }
  return trace;
}

namespace detail {

inline void require_symmetric(const Mat& k, const char* ctx) {
  if (k.rows() != k.cols())
    throw std::invalid_argument(std::string(ctx) + ": kernel must be square");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument(std::string(ctx) +
                                ": kernel must be symmetric");
}

}  // namespace detail

// tr((Y - A k)(Y - A k)^T) + mu tr(k A^T A)
inline double krr_objective(const Mat& a, const Mat& k, const Mat& y,
                            double mu) {
  detail::require_symmetric(k, "krr_objective");
  if (a.rows() != y.rows() || a.cols() != y.cols() || a.cols() != k.rows())
    throw std::invalid_argument("krr_objective: shape mismatch");
  if (!(mu >= 0.0))
    throw std::invalid_argument("krr_objective: mu must be >= 0");
  const Mat ak = a * k;
  const double fit = (y - ak).squaredNorm();
  const double reg = ak.cwiseProduct(a).sum();  // tr(k A^T A)
  return fit + mu * reg;
}

// sum_c Y_c^T (k + mu I)^{-1} k Y_c, the value recovered by the best
// predictor for a fixed kernel; larger means a better-aligned kernel
inline double conditional_opt_gain(const Mat& k, const Mat& y, double mu) {
  detail::require_symmetric(k, "conditional_opt_gain");
  if (y.cols() != k.rows())
    throw std::invalid_argument("conditional_opt_gain: shape mismatch");
  if (!(mu > 0.0))
    throw std::invalid_argument("conditional_opt_gain: mu must be > 0");
  const auto eig = sym_eig(k);
  const double top = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() < -1e-9 * top)
    throw std::invalid_argument(
        "conditional_opt_gain: kernel must be positive semidefinite");
  const Eigen::Index n = k.rows();
  const Mat solved =
      spd_solve(k + mu * Mat::Identity(n, n), k * y.transpose(), {0.0, 1e-12})
          .x;
  return (y * solved).trace();
}

namespace detail {

// alternating projection onto {PSD} ∩ {entries >= 0} ∩ {unit diagonal}
inline Mat project_feasible_kernel(Mat k, int iterations = 50) {
  for (int it = 0; it < iterations; ++it) {
    k = ((k + k.transpose()) / 2.0).eval();
    auto eig = sym_eig(k);
    const Vec clamped = eig.values.cwiseMax(0.0);
    k = eig.vectors * clamped.asDiagonal() * eig.vectors.transpose();
    k = k.cwiseMax(0.0);
    k.diagonal().setOnes();
  }
  return ((k + k.transpose()) / 2.0).eval();
}

// one random feasible kernel: a convex mix of block patterns (the sorted
// block kernel, a permuted block kernel, identity, all-ones), optionally
// perturbed and projected back onto the feasible set
inline Mat random_feasible_kernel(int k, int n, std::uint64_t seed) {
  Rng rng(seed);
  const int nn = k * n;
  std::vector<int> perm(static_cast<std::size_t>(nn));
  std::iota(perm.begin(), perm.end(), 0);
  deterministic_shuffle(perm, rng);
  Mat permuted(nn, nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      permuted(i, j) = perm[static_cast<std::size_t>(i)] / n ==
                               perm[static_cast<std::size_t>(j)] / n
                           ? 1.0
                           : 0.0;

  double w[4];
  double total = 0.0;
  for (double& wi : w) {
    wi = rng.uniform();
    total += wi;
  }
  Mat mix = (w[0] * Mat::Identity(nn, nn) + w[1] * Mat::Ones(nn, nn) +
             w[2] * balanced_label_gram(k, n) + w[3] * permuted) /
            total;
  if (rng.uniform() < 0.5) {
    Mat noise(nn, nn);
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) noise(i, j) = rng.normal();
    mix += 0.2 * rng.uniform() * ((noise + noise.transpose()) / 2.0);
  }
  return project_feasible_kernel(mix);
}

}  // namespace detail

struct KernelSearchResult {
  double best_gain = 0.0;
  Mat best_k;
  double gap = 0.0;  // closed-form optimum minus best gain found
};

// randomized certificate that the block-ones kernel maximizes the
// conditional gain over feasible kernels (PSD, nonnegative, unit diagonal)
inline KernelSearchResult search_kernel_opt(int k, int n, double mu,
                                            int trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("search_kernel_opt: trials must be >= 1");
  if (!(mu > 0.0))
    throw std::invalid_argument("search_kernel_opt: mu must be > 0");
  const Eigen::Index nn = static_cast<Eigen::Index>(k) * n;
  const Mat y =
      encode_labels(balanced_labels(k, n), k, LabelEncoding::ZeroOne);

  KernelSearchResult result;
  result.best_gain = -1.0;
  auto consider = [&](const Mat& candidate) {
    const double gain = conditional_opt_gain(candidate, y, mu);
    if (gain > result.best_gain) {
      result.best_gain = gain;
      result.best_k = candidate;
    }
  };
  consider(balanced_label_gram(k, n));
  consider(Mat::Identity(nn, nn));
  consider(Mat::Ones(nn, nn));

  std::vector<double> gains(static_cast<std::size_t>(trials));
  parallel_chunks(trials, [&](std::size_t, int begin, int end) {
    for (int t = begin; t < end; ++t) {
      const Mat candidate = detail::random_feasible_kernel(
          k, n, split_seed(seed, static_cast<std::uint64_t>(t)));
      gains[static_cast<std::size_t>(t)] = conditional_opt_gain(candidate, y, mu);
    }
  });
  int best_trial = -1;
  for (int t = 0; t < trials; ++t) {
    if (gains[static_cast<std::size_t>(t)] > result.best_gain) {
      result.best_gain = gains[static_cast<std::size_t>(t)];
      best_trial = t;
    }
  }
  if (best_trial >= 0)
    result.best_k = detail::random_feasible_kernel(
        k, n, split_seed(seed, static_cast<std::uint64_t>(best_trial)));

  const double closed = static_cast<double>(k) * n * n / (n + mu);
  result.gap = closed - result.best_gain;
  return result;
}

}  // namespace agopnc
