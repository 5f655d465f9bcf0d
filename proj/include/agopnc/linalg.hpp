#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "agopnc/matrix.hpp"

namespace agopnc {

struct SymEig {
  Vec values;   // descending
  Mat vectors;  // orthonormal columns, aligned with values
};

inline SymEig sym_eig(const Mat& a) {
  ensure_finite(a, "sym_eig");
  if (a.rows() != a.cols())
    throw std::invalid_argument("sym_eig: non-square input");
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("sym_eig: asymmetric input");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success)
    throw NumericalError("sym_eig: eigensolver did not converge");
  SymEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

// Symmetric PSD square root via eigendecomposition. Eigenvalues in
// [-clampTol * lambda_max, 0) clamp to zero; anything below that is treated as
// a genuinely non-PSD input.
inline Mat psd_sqrt(const Mat& m, double clamp_tol = 1e-10) {
  SymEig eig = sym_eig(m);
  const double lmax = std::max(eig.values(0), 0.0);
  const double floor = -clamp_tol * lmax;
  Vec roots = eig.values;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (roots(i) < floor)
      throw NumericalError(
          "psd_sqrt: eigenvalue " + std::to_string(roots(i)) +
          " below -clampTol*lambda_max (" + std::to_string(floor) + ")");
    roots(i) = std::sqrt(std::max(roots(i), 0.0));
  }
  Mat r = eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (r + r.transpose());
}

struct SpdSolveResult {
  Mat x;
  double jitter_used = 0.0;
};

// Cholesky solve with an escalating diagonal jitter ladder. The jitter fall
// back only triggers on factorization failure; successful factorizations keep
// the solution from the smallest workable jitter.
inline SpdSolveResult spd_solve(
    const Mat& a, const Mat& b,
    const std::vector<double>& jitter_ladder = {0.0, 1e-10, 1e-8, 1e-6}) {
  ensure_finite(a, "spd_solve");
  ensure_finite(b, "spd_solve rhs");
  if (a.rows() != a.cols())
    throw std::invalid_argument("spd_solve: non-square system matrix");
  if (b.rows() != a.rows())
    throw std::invalid_argument("spd_solve: rhs row count mismatch");
  for (double jitter : jitter_ladder) {
    Mat aj = a;
    aj.diagonal().array() += jitter;
    Eigen::LLT<Mat> llt(aj);
    if (llt.info() == Eigen::Success) {
      SpdSolveResult out;
      out.x = llt.solve(b);
      out.jitter_used = jitter;
      if (out.x.allFinite()) return out;
    }
  }
  throw NumericalError("spd_solve: factorization failed at maximum jitter");
}

// Pearson correlation of the two matrices viewed as flat vectors, with the
// mean of each subtracted first.
inline double pearson_flat(const Mat& a, const Mat& b) {
  ensure_finite(a, "pearson_flat");
  ensure_finite(b, "pearson_flat");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("pearson_flat: shape mismatch");
  Eigen::ArrayXXd ca = a.array() - a.mean();
  Eigen::ArrayXXd cb = b.array() - b.mean();
  const double va = (ca * ca).sum();
  const double vb = (cb * cb).sum();
  const double tiny_a = 1e-28 * std::max(1.0, a.squaredNorm());
  const double tiny_b = 1e-28 * std::max(1.0, b.squaredNorm());
  if (va <= tiny_a || vb <= tiny_b)
    throw std::invalid_argument("pearson_flat: constant input matrix");
  const double r = (ca * cb).sum() / std::sqrt(va * vb);
  return std::min(1.0, std::max(-1.0, r));
}

// Largest singular value by power iteration on A^T A. The start vector uses a
// fixed graded pattern so runs are deterministic while avoiding exact
// orthogonality to structured top singular vectors.
inline double spectral_norm(const Mat& a, double tol = 1e-10,
                            int max_iter = 100000) {
  ensure_finite(a, "spectral_norm");
  if (a.norm() == 0.0) return 0.0;
  Vec v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = 1.0 + 0.0078125 * static_cast<double>(i);
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = a.transpose() * (a * v);
    const double s2 = w.norm();
    if (s2 == 0.0) return 0.0;
    v = w / s2;
    const double s = std::sqrt(s2);
    if (std::abs(s - prev) <= tol * std::max(s, 1e-300)) return s;
    prev = s;
  }
  return prev;
}

inline Mat column_normalize(const Mat& x) {
  ensure_finite(x, "column_normalize");
  Mat out = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double n = x.col(j).norm();
    if (n < 1e-12)
      throw std::invalid_argument("column_normalize: column " +
                                  std::to_string(j) + " has norm below 1e-12");
    out.col(j) /= n;
  }
  return out;
}

}  // namespace agopnc
