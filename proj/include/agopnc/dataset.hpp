#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "agopnc/matrix.hpp"
#include "agopnc/rng.hpp"

namespace agopnc {

// One sample per column.
struct Dataset {
  Mat x;
  std::vector<int> labels;
  int num_classes = 0;
};

inline void validate_dataset(const Dataset& ds, const char* ctx) {
  ensure_finite(ds.x, ctx);
  if (ds.num_classes < 1)
    throw std::invalid_argument(std::string(ctx) + ": num_classes < 1");
  if (static_cast<Eigen::Index>(ds.labels.size()) != ds.x.cols())
    throw std::invalid_argument(std::string(ctx) + ": label count mismatch");
  for (int l : ds.labels)
    if (l < 0 || l >= ds.num_classes)
      throw std::invalid_argument(std::string(ctx) + ": label out of range");
}

inline std::vector<int> class_counts(const std::vector<int>& labels, int k) {
  std::vector<int> counts(k, 0);
  for (int l : labels) {
    if (l < 0 || l >= k)
      throw std::invalid_argument("class_counts: label out of range");
    ++counts[l];
  }
  return counts;
}

// K classes on mutually orthogonal mean directions with pairwise mean
// distance `separation`; isotropic Gaussian noise around each mean. Samples
// come out class-major.
inline Dataset gen_gaussian_classes(int k, int n, int d, double separation,
                                    double noise, std::uint64_t seed) {
  if (k < 1 || n < 1 || d < 1)
    throw std::invalid_argument("gen_gaussian_classes: sizes must be >= 1");
  if (d < k)
    throw std::invalid_argument(
        "gen_gaussian_classes: need d >= K for orthogonal class means");
  if (separation < 0.0 || noise < 0.0)
    throw std::invalid_argument(
        "gen_gaussian_classes: separation and noise must be >= 0");
  Rng rng(seed);
  Mat basis = gaussian_matrix(d, k, rng);
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(d, k);
  Mat means = (separation / std::sqrt(2.0)) * q;

  Dataset ds;
  ds.num_classes = k;
  ds.x.resize(d, static_cast<Eigen::Index>(k) * n);
  ds.labels.resize(static_cast<std::size_t>(k) * n);
  Eigen::Index col = 0;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < n; ++i, ++col) {
      for (int r = 0; r < d; ++r)
        ds.x(r, col) = means(r, c) + noise * rng.normal();
      ds.labels[static_cast<std::size_t>(col)] = c;
    }
  }
  return ds;
}

enum class LabelEncoding { ZeroOne, PmOne };

inline const char* label_encoding_name(LabelEncoding mode) {
  switch (mode) {
    case LabelEncoding::ZeroOne: return "zero_one";
    case LabelEncoding::PmOne: return "pm_one";
  }
  throw std::invalid_argument("label_encoding_name: unknown mode");
}

inline LabelEncoding label_encoding_from_name(const std::string& name) {
  if (name == "zero_one") return LabelEncoding::ZeroOne;
  if (name == "pm_one") return LabelEncoding::PmOne;
  throw std::invalid_argument("unknown label encoding: " + name);
}

// K x N label matrix: column i one-hot encodes labels[i], with "off" entries
// 0 (ZeroOne) or -1 (PmOne).
inline Mat encode_labels(const std::vector<int>& labels, int k,
                         LabelEncoding mode) {
  if (k < 1) throw std::invalid_argument("encode_labels: K < 1");
  if (labels.empty()) throw std::invalid_argument("encode_labels: no labels");
  const double off = mode == LabelEncoding::PmOne ? -1.0 : 0.0;
  Mat y = Mat::Constant(k, static_cast<Eigen::Index>(labels.size()), off);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k)
      throw std::invalid_argument("encode_labels: label out of range");
    y(labels[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return y;
}

enum class GlobalMean { ClassBalanced, Sample };

inline Vec global_mean(const Mat& x, const std::vector<int>& labels, int k,
                       GlobalMean mode) {
  ensure_finite(x, "global_mean");
  if (static_cast<Eigen::Index>(labels.size()) != x.cols())
    throw std::invalid_argument("global_mean: label count mismatch");
  if (mode == GlobalMean::Sample) return x.rowwise().mean();
  const std::vector<int> counts = class_counts(labels, k);
  Mat mu = Mat::Zero(x.rows(), k);
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    mu.col(labels[static_cast<std::size_t>(i)]) += x.col(i);
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0)
      throw std::invalid_argument("global_mean: class " + std::to_string(c) +
                                  " has no samples");
    mu.col(c) /= counts[c];
  }
  return mu.rowwise().mean();
}

inline Mat center_global(const Mat& x, const std::vector<int>& labels, int k,
                         GlobalMean mode = GlobalMean::ClassBalanced) {
  const Vec mu = global_mean(x, labels, k, mode);
  return x.colwise() - mu;
}

// Stable class-major reordering (original order kept within each class).
inline Dataset sorted_class_major(const Dataset& ds) {
  validate_dataset(ds, "sorted_class_major");
  std::vector<Eigen::Index> order(ds.labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return ds.labels[static_cast<std::size_t>(a)] <
                            ds.labels[static_cast<std::size_t>(b)];
                   });
  Dataset out;
  out.num_classes = ds.num_classes;
  out.x.resize(ds.x.rows(), ds.x.cols());
  out.labels.resize(ds.labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.x.col(static_cast<Eigen::Index>(i)) = ds.x.col(order[i]);
    out.labels[i] = ds.labels[static_cast<std::size_t>(order[i])];
  }
  return out;
}

}  // namespace agopnc
