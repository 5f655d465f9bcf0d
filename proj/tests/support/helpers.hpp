#pragma once

#include <string>

#include "agopnc/matrix.hpp"
#include "agopnc/rng.hpp"

namespace testutil {

inline agopnc::Mat random_matrix(agopnc::Rng& rng, Eigen::Index r,
                                 Eigen::Index c) {
  return agopnc::gaussian_matrix(r, c, rng);
}

inline agopnc::Mat random_symmetric(agopnc::Rng& rng, Eigen::Index n) {
  agopnc::Mat a = random_matrix(rng, n, n);
  return 0.5 * (a + a.transpose());
}

// PSD, typically rank-deficient when r < n.
inline agopnc::Mat random_psd(agopnc::Rng& rng, Eigen::Index n,
                              Eigen::Index r) {
  agopnc::Mat b = random_matrix(rng, r, n);
  return b.transpose() * b;
}

// Strictly positive definite with eigenvalues >= ridge.
inline agopnc::Mat random_spd(agopnc::Rng& rng, Eigen::Index n,
                              double ridge = 0.5) {
  agopnc::Mat a = random_psd(rng, n, n) / static_cast<double>(n);
  a.diagonal().array() += ridge;
  return a;
}

inline double rel_err(const agopnc::Mat& got, const agopnc::Mat& want) {
  const double denom = want.norm();
  return (got - want).norm() / (denom > 0 ? denom : 1.0);
}

}  // namespace testutil
