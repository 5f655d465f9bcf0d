#pragma once

#include <cmath>
#include <vector>

#include "agopnc/linalg.hpp"
#include "agopnc/runtime.hpp"

namespace agopnc {

enum class KernelKind { Laplace, Gaussian, Linear };

inline const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Laplace: return "laplace";
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Linear: return "linear";
  }
  throw std::invalid_argument("kernel_kind_name: unknown kind");
}

inline KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "laplace") return KernelKind::Laplace;
  if (name == "gaussian") return KernelKind::Gaussian;
  if (name == "linear") return KernelKind::Linear;
  throw std::invalid_argument("unknown kernel kind: " + name);
}

struct KernelSpec {
  KernelKind kind = KernelKind::Laplace;
  double bandwidth = 2.0;  // length scale; ignored by Linear
};

inline void validate_kernel(const KernelSpec& spec) {
  if (spec.kind != KernelKind::Linear && spec.bandwidth <= 0.0)
    throw std::invalid_argument("kernel: bandwidth must be > 0");
}

inline double kernel_value(const KernelSpec& spec, const Vec& x, const Vec& z) {
  validate_kernel(spec);
  if (x.size() != z.size())
    throw std::invalid_argument("kernel_value: dimension mismatch");
  switch (spec.kind) {
    case KernelKind::Laplace:
      return std::exp(-(x - z).norm() / spec.bandwidth);
    case KernelKind::Gaussian:
      return std::exp(-(x - z).squaredNorm() /
                      (2.0 * spec.bandwidth * spec.bandwidth));
    case KernelKind::Linear:
      return x.dot(z);
  }
  throw std::invalid_argument("kernel_value: unknown kernel kind");
}

// Entry (i, j) = k(a_i, b_j) for columns a_i of A and b_j of B. Distances are
// taken directly on column differences: the inner-product shortcut cancels
// catastrophically for near-identical points and would leave the Gram
// diagonal off by ~1e-8. Per-pair evaluation also makes the result byte
// identical for every thread count (work splits over column blocks of B with
// disjoint writes).
inline Mat kernel_matrix(const KernelSpec& spec, const Mat& a, const Mat& b) {
  validate_kernel(spec);
  ensure_finite(a, "kernel_matrix");
  ensure_finite(b, "kernel_matrix");
  if (a.rows() != b.rows())
    throw std::invalid_argument("kernel_matrix: dimension mismatch");
  Mat out(a.cols(), b.cols());
  const double bw = spec.bandwidth;
  parallel_chunks(b.cols(), [&](std::size_t, std::ptrdiff_t lo,
                                std::ptrdiff_t hi) {
    for (std::ptrdiff_t j = lo; j < hi; ++j) {
      for (Eigen::Index i = 0; i < a.cols(); ++i) {
        switch (spec.kind) {
          case KernelKind::Laplace:
            out(i, j) = std::exp(-(a.col(i) - b.col(j)).norm() / bw);
            break;
          case KernelKind::Gaussian:
            out(i, j) = std::exp(-(a.col(i) - b.col(j)).squaredNorm() /
                                 (2.0 * bw * bw));
            break;
          case KernelKind::Linear:
            out(i, j) = a.col(i).dot(b.col(j));
            break;
        }
      }
    }
  });
  return out;
}

struct KrrModel {
  KernelSpec spec;
  Mat train_x;  // d x N
  Mat alpha;    // K x N
  double ridge = 0.0;
  double jitter_used = 0.0;
};

// alpha = Y (k(X,X) + ridge I)^{-1}
inline KrrModel krr_fit(const KernelSpec& spec, const Mat& x, const Mat& y,
                        double ridge) {
  ensure_finite(x, "krr_fit X");
  ensure_finite(y, "krr_fit Y");
  if (y.cols() != x.cols())
    throw std::invalid_argument("krr_fit: X and Y sample counts differ");
  if (ridge < 0.0) throw std::invalid_argument("krr_fit: ridge must be >= 0");
  Mat k = kernel_matrix(spec, x, x);
  k.diagonal().array() += ridge;
  auto solved = spd_solve(k, y.transpose());
  KrrModel model;
  model.spec = spec;
  model.train_x = x;
  model.alpha = solved.x.transpose();
  model.ridge = ridge;
  model.jitter_used = solved.jitter_used;
  return model;
}

inline Mat krr_predict(const KrrModel& model, const Mat& z) {
  return model.alpha * kernel_matrix(model.spec, model.train_x, z);
}

inline Mat krr_predict(const KrrModel& model, const Vec& z) {
  return krr_predict(model, Mat(z));
}

// Transposed predictor Jacobian d f(z)/d z, one column per output, using the
// closed-form kernel gradients. The laplace kernel contributes nothing from a
// training point closer than 1e-12 (its kink).
inline Mat grad_predictor(const KrrModel& model, const Vec& z) {
  const Mat& x = model.train_x;
  if (z.size() != x.rows())
    throw std::invalid_argument("grad_predictor: dimension mismatch");
  const double bw = model.spec.bandwidth;
  if (model.spec.kind == KernelKind::Linear)
    return x * model.alpha.transpose();

  Vec c(x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double r = (x.col(i) - z).norm();
    if (model.spec.kind == KernelKind::Laplace) {
      c(i) = r < 1e-12 ? 0.0 : std::exp(-r / bw) / (bw * r);
    } else {
      c(i) = std::exp(-r * r / (2.0 * bw * bw)) / (bw * bw);
    }
  }
  // sum_i c_i (x_i - z) alpha_i^T
  Mat at = model.alpha.transpose();  // N x K
  Mat weighted = c.asDiagonal() * at;
  Vec s = at.transpose() * c;
  return x * weighted - z * s.transpose();
}

// (1/N) sum over evaluation columns of g g^T with g = grad_predictor.
inline Mat agop(const KrrModel& model, const Mat& x_eval) {
  ensure_finite(x_eval, "agop");
  if (x_eval.rows() != model.train_x.rows())
    throw std::invalid_argument("agop: dimension mismatch");
  const Eigen::Index d = x_eval.rows();
  const Eigen::Index n = x_eval.cols();
  const auto chunks = chunk_ranges(n, threads());
  std::vector<Mat> partial(chunks.size(), Mat::Zero(d, d));
  parallel_chunks(n, [&](std::size_t ci, std::ptrdiff_t lo, std::ptrdiff_t hi) {
    Mat acc = Mat::Zero(d, d);
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      Mat g = grad_predictor(model, x_eval.col(i));
      acc.noalias() += g * g.transpose();
    }
    partial[ci] = std::move(acc);
  });
  Mat m = Mat::Zero(d, d);
  for (const Mat& p : partial) m += p;
  m /= static_cast<double>(n);
  return 0.5 * (m + m.transpose());
}

// Same quantity with the predictor Jacobian taken by central differences;
// the independent check on grad_predictor and agop.
inline Mat agop_fd(const KrrModel& model, const Mat& x_eval, double h) {
  ensure_finite(x_eval, "agop_fd");
  if (h <= 0.0) throw std::invalid_argument("agop_fd: h must be > 0");
  const Eigen::Index d = x_eval.rows();
  const Eigen::Index k = model.alpha.rows();
  Mat m = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < x_eval.cols(); ++i) {
    Mat j(d, k);
    for (Eigen::Index r = 0; r < d; ++r) {
      Vec zp = x_eval.col(i), zm = x_eval.col(i);
      zp(r) += h;
      zm(r) -= h;
      j.row(r) =
          ((krr_predict(model, zp) - krr_predict(model, zm)) / (2.0 * h))
              .transpose();
    }
    m.noalias() += j * j.transpose();
  }
  m /= static_cast<double>(x_eval.cols());
  return 0.5 * (m + m.transpose());
}

}  // namespace agopnc
