#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "agopnc/matrix.hpp"

namespace agopnc {

// splitmix64 finalizer; derives independent stream seeds from a master seed so
// per-layer / per-epoch streams never overlap.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic generator. The variate transforms are written out explicitly
// (Box-Muller, inverse-CDF Cauchy, rejection-sampled integers) so streams do
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double cauchy(double scale) {
    double u = 0.0;
    do {
      u = uniform();
    } while (u <= 0.0);
    return scale * std::tan(std::numbers::pi * (u - 0.5));
  }

  // uniform integer in [0, bound), bound >= 1
  std::uint64_t integer(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = 0;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates with our own integer draws; std::shuffle is
// implementation-defined and would break run-to-run byte determinism across
// standard libraries.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.integer(i)]);
  }
}

// Fills row by row so the layout of the draw is part of the contract.
inline Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng,
                           double stddev = 1.0) {
  Mat w(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = stddev * rng.normal();
  return w;
}

}  // namespace agopnc
