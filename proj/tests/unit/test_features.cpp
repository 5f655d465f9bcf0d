#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "agopnc/features.hpp"
#include "agopnc/runtime.hpp"
#include "support/helpers.hpp"

using agopnc::FeatureKind;
using agopnc::FeatureMapSpec;
using agopnc::Mat;
using agopnc::Vec;

TEST_CASE("arccos_expected_inner matches pinned values") {
  REQUIRE(agopnc::arccos_expected_inner(1.0) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(agopnc::arccos_expected_inner(0.0) ==
          Catch::Approx(0.3183098861837907).margin(1e-12));
  REQUIRE(agopnc::arccos_expected_inner(-1.0) ==
          Catch::Approx(0.0).margin(1e-12));
  REQUIRE_THROWS_AS(agopnc::arccos_expected_inner(1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(agopnc::arccos_expected_inner(-1.01), std::invalid_argument);

  double prev = agopnc::arccos_expected_inner(-1.0);
  for (double r = -0.9; r <= 1.0; r += 0.1) {
    double v = agopnc::arccos_expected_inner(r);
    REQUIRE(v >= prev);
    prev = v;
  }
}

TEST_CASE("relu feature map is deterministic per seed and nonnegative") {
  FeatureMapSpec spec{FeatureKind::Relu, 64, 0.0, 99};
  Mat x = Mat::Random(5, 7);
  Mat f1 = agopnc::apply_feature_map(spec, x);
  Mat f2 = agopnc::apply_feature_map(spec, x);
  REQUIRE(f1 == f2);
  REQUIRE(f1.rows() == 64);
  REQUIRE(f1.cols() == 7);
  REQUIRE(f1.minCoeff() >= 0.0);

  spec.seed = 100;
  Mat f3 = agopnc::apply_feature_map(spec, x);
  REQUIRE(f1 != f3);
}

TEST_CASE("relu feature map inner products track the arccos closed form") {
  // single-draw scatter at this width is ~0.023, so average a few seeds
  const int d = 50;
  for (double r : {-0.5, 0.0, 0.5, 1.0}) {
    Mat xy = Mat::Zero(d, 2);
    xy(0, 0) = 1.0;
    xy(0, 1) = r;
    xy(1, 1) = std::sqrt(1.0 - r * r);
    double inner = 0.0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      FeatureMapSpec spec{FeatureKind::Relu, 4096, 0.0, seed};
      Mat f = agopnc::apply_feature_map(spec, xy);
      inner += f.col(0).dot(f.col(1)) / 4.0;
    }
    REQUIRE(inner == Catch::Approx(agopnc::arccos_expected_inner(r)).margin(0.05));
  }
}

TEST_CASE("rff laplacian map approximates the l1 exponential kernel") {
  // distance chosen so the l1 and l2 exponentials differ grossly: the match
  // must come from the l1 form
  const int d = 10;
  const double sigma = 2.0;
  FeatureMapSpec spec{FeatureKind::RffLaplacian, 4096, sigma, 21};
  Mat xz = Mat::Zero(d, 2);
  xz.col(1).setConstant(0.3);  // l1 distance 3, l2 distance ~0.95

  Mat f = agopnc::apply_feature_map(spec, xz);
  REQUIRE(f.rows() == 4096);
  const double self0 = f.col(0).squaredNorm();
  const double self1 = f.col(1).squaredNorm();
  const double cross = f.col(0).dot(f.col(1));
  REQUIRE(self0 == Catch::Approx(1.0).margin(0.05));
  REQUIRE(self1 == Catch::Approx(1.0).margin(0.05));
  const double l1_target = std::exp(-3.0 / sigma);
  const double l2_target = std::exp(-xz.col(1).norm() / sigma);
  REQUIRE(cross == Catch::Approx(l1_target).margin(0.05));
  REQUIRE(std::abs(cross - l2_target) > 0.2);
}

TEST_CASE("feature map validation and thread invariance") {
  Mat x = Mat::Random(4, 9);
  REQUIRE_THROWS_AS(
      agopnc::apply_feature_map({FeatureKind::Relu, 0, 0.0, 1}, x),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      agopnc::apply_feature_map({FeatureKind::RffLaplacian, 16, 0.0, 1}, x),
      std::invalid_argument);

  FeatureMapSpec spec{FeatureKind::Relu, 32, 0.0, 5};
  agopnc::set_threads(1);
  Mat ref = agopnc::apply_feature_map(spec, x);
  agopnc::set_threads(4);
  Mat par1 = agopnc::apply_feature_map(spec, x);
  Mat par2 = agopnc::apply_feature_map(spec, x);
  agopnc::set_threads(1);
  REQUIRE(par1 == par2);
  REQUIRE(testutil::rel_err(par1, ref) < 1e-10);
}
