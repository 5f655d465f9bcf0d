#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace agopnc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// A computation failed numerically (ill-conditioned factorization, divergence,
// non-PSD input to a square root, ...), as opposed to malformed arguments.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void ensure_nonempty(const Mat& a, const char* ctx) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument(std::string(ctx) + ": empty matrix");
}

inline void ensure_finite(const Mat& a, const char* ctx) {
  ensure_nonempty(a, ctx);
  if (!a.allFinite())
    throw std::invalid_argument(std::string(ctx) + ": non-finite entries");
}

}  // namespace agopnc
