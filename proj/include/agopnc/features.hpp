#pragma once

#include <cmath>
#include <numbers>

#include "agopnc/matrix.hpp"
#include "agopnc/rng.hpp"
#include "agopnc/runtime.hpp"

namespace agopnc {

enum class FeatureKind { Relu, RffLaplacian };

inline const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Relu: return "relu";
    case FeatureKind::RffLaplacian: return "rff_laplacian";
  }
  throw std::invalid_argument("feature_kind_name: unknown kind");
}

inline FeatureKind feature_kind_from_name(const std::string& name) {
  if (name == "relu") return FeatureKind::Relu;
  if (name == "rff_laplacian") return FeatureKind::RffLaplacian;
  throw std::invalid_argument("unknown feature map kind: " + name);
}

struct FeatureMapSpec {
  FeatureKind kind = FeatureKind::Relu;
  int width = 1024;
  double bandwidth = 0.05;  // RffLaplacian only
  std::uint64_t seed = 0;
};

inline void validate_feature_spec(const FeatureMapSpec& spec) {
  if (spec.width < 1)
    throw std::invalid_argument("feature map: width must be >= 1");
  if (spec.kind == FeatureKind::RffLaplacian && spec.bandwidth <= 0.0)
    throw std::invalid_argument("feature map: bandwidth must be > 0");
}

// Expected inner product of width-normalized ReLU random features of two unit
// vectors at correlation r: (1/pi) (sin t + (pi - t) cos t), t = arccos r.
inline double arccos_expected_inner(double r) {
  if (r < -1.0 || r > 1.0)
    throw std::invalid_argument("arccos_expected_inner: r outside [-1, 1]");
  const double t = std::acos(r);
  return (std::sin(t) + (std::numbers::pi - t) * std::cos(t)) /
         std::numbers::pi;
}

namespace detail {

// Applies y = f(W x + shift) over column chunks with disjoint writes.
template <typename F>
Mat map_columns(const Mat& w, const Vec* shift, const Mat& x, F f) {
  Mat out(w.rows(), x.cols());
  parallel_chunks(x.cols(), [&](std::size_t, std::ptrdiff_t lo,
                                std::ptrdiff_t hi) {
    for (std::ptrdiff_t j = lo; j < hi; ++j) {
      Vec v = w * x.col(j);
      if (shift) v += *shift;
      out.col(j) = v.unaryExpr(f);
    }
  });
  return out;
}

}  // namespace detail

// max(0, W x) with W entries i.i.d. N(0, 2/width), drawn fresh from the seed.
inline Mat relu_feature_map(const FeatureMapSpec& spec, const Mat& x) {
  validate_feature_spec(spec);
  ensure_finite(x, "relu_feature_map");
  Rng rng(spec.seed);
  const Mat w = gaussian_matrix(spec.width, x.rows(), rng,
                                std::sqrt(2.0 / spec.width));
  return detail::map_columns(w, nullptr, x,
                             [](double v) { return v > 0.0 ? v : 0.0; });
}

// sqrt(2/width) cos(W x + b) with W entries i.i.d. Cauchy of scale
// 1/bandwidth and b uniform on [0, 2pi); the empirical inner products
// approximate exp(-||x - z||_1 / bandwidth). W draws first, then b.
inline Mat rff_laplacian_map(const FeatureMapSpec& spec, const Mat& x) {
  validate_feature_spec(spec);
  ensure_finite(x, "rff_laplacian_map");
  Rng rng(spec.seed);
  Mat w(spec.width, x.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      w(i, j) = rng.cauchy(1.0 / spec.bandwidth);
  Vec b(spec.width);
  for (Eigen::Index i = 0; i < b.size(); ++i)
    b(i) = 2.0 * std::numbers::pi * rng.uniform();
  const double scale = std::sqrt(2.0 / spec.width);
  return detail::map_columns(
      w, &b, x, [scale](double v) { return scale * std::cos(v); });
}

inline Mat apply_feature_map(const FeatureMapSpec& spec, const Mat& x) {
  switch (spec.kind) {
    case FeatureKind::Relu:
      return relu_feature_map(spec, x);
    case FeatureKind::RffLaplacian:
      return rff_laplacian_map(spec, x);
  }
  throw std::invalid_argument("apply_feature_map: unknown feature kind");
}

}  // namespace agopnc
