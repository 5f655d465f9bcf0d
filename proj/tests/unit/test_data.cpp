#include <catch2/catch_amalgamated.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "agopnc/dataset.hpp"
#include "agopnc/idx.hpp"
#include "support/helpers.hpp"

using agopnc::Dataset;
using agopnc::Mat;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "agopnc_test_idx";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_bytes(const std::filesystem::path& p,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

void push_u32_be(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(static_cast<std::uint8_t>(x >> 24));
  v.push_back(static_cast<std::uint8_t>(x >> 16));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
  v.push_back(static_cast<std::uint8_t>(x));
}

std::vector<std::uint8_t> image_bytes(std::uint32_t magic, std::uint32_t count,
                                      std::uint32_t rows, std::uint32_t cols,
                                      const std::vector<std::uint8_t>& pixels) {
  std::vector<std::uint8_t> v;
  push_u32_be(v, magic);
  push_u32_be(v, count);
  push_u32_be(v, rows);
  push_u32_be(v, cols);
  v.insert(v.end(), pixels.begin(), pixels.end());
  return v;
}

std::vector<std::uint8_t> label_bytes(std::uint32_t magic, std::uint32_t count,
                                      const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> v;
  push_u32_be(v, magic);
  push_u32_be(v, count);
  v.insert(v.end(), labels.begin(), labels.end());
  return v;
}

}  // namespace

TEST_CASE("gen_gaussian_classes is deterministic and class-major") {
  Dataset a = agopnc::gen_gaussian_classes(3, 5, 10, 4.0, 0.1, 42);
  Dataset b = agopnc::gen_gaussian_classes(3, 5, 10, 4.0, 0.1, 42);
  REQUIRE(a.x == b.x);
  REQUIRE(a.labels == b.labels);
  REQUIRE(a.num_classes == 3);
  REQUIRE(a.x.rows() == 10);
  REQUIRE(a.x.cols() == 15);
  for (int i = 0; i < 15; ++i) REQUIRE(a.labels[i] == i / 5);

  Dataset c = agopnc::gen_gaussian_classes(3, 5, 10, 4.0, 0.1, 43);
  REQUIRE(a.x != c.x);
}

TEST_CASE("gen_gaussian_classes sample means track constructed means") {
  const int K = 3, n = 5, d = 10;
  const double sep = 4.0, noise = 0.1;
  Dataset ds = agopnc::gen_gaussian_classes(K, n, d, sep, noise, 42);

  // sample-mean oracle: per-class empirical means must sit within the CLT
  // band of the constructed means, and the constructed means must be mutually
  // (sep/sqrt(2))-scaled orthonormal, i.e. pairwise distance sep.
  std::vector<agopnc::Vec> mu(K, agopnc::Vec::Zero(d));
  for (int i = 0; i < K * n; ++i) mu[ds.labels[i]] += ds.x.col(i);
  for (int c = 0; c < K; ++c) mu[c] /= n;

  const double band = 3.0 * noise / std::sqrt(static_cast<double>(n));
  for (int c = 0; c < K; ++c) {
    // recover the constructed mean: empirical mean deviates by O(noise/sqrt n)
    REQUIRE(std::abs(mu[c].norm() - sep / std::sqrt(2.0)) < band * std::sqrt(d));
  }
  for (int c = 0; c < K; ++c)
    for (int c2 = c + 1; c2 < K; ++c2)
      REQUIRE(std::abs((mu[c] - mu[c2]).norm() - sep) <
              2.0 * band * std::sqrt(d));

  REQUIRE_THROWS_AS(agopnc::gen_gaussian_classes(5, 2, 3, 1.0, 0.1, 1),
                    std::invalid_argument);
}

TEST_CASE("encode_labels produces the requested convention") {
  std::vector<int> labels = {0, 1};
  Mat zo = agopnc::encode_labels(labels, 2, agopnc::LabelEncoding::ZeroOne);
  REQUIRE(zo(0, 0) == 1.0);
  REQUIRE(zo(1, 0) == 0.0);
  REQUIRE(zo(0, 1) == 0.0);
  REQUIRE(zo(1, 1) == 1.0);

  Mat pm = agopnc::encode_labels(labels, 2, agopnc::LabelEncoding::PmOne);
  REQUIRE(pm(0, 0) == 1.0);
  REQUIRE(pm(1, 0) == -1.0);
  REQUIRE(pm(0, 1) == -1.0);
  REQUIRE(pm(1, 1) == 1.0);

  REQUIRE_THROWS_AS(
      agopnc::encode_labels({0, 2}, 2, agopnc::LabelEncoding::ZeroOne),
      std::invalid_argument);
}

TEST_CASE("center_global removes the class-balanced mean") {
  // unbalanced on purpose: class 0 has 3 samples, class 1 has 1
  Mat x(2, 4);
  x << 1, 1, 1, 3, 0, 0, 0, 2;
  std::vector<int> labels = {0, 0, 0, 1};

  Mat cb = agopnc::center_global(x, labels, 2, agopnc::GlobalMean::ClassBalanced);
  // mean of class means = ((1,0) + (3,2))/2 = (2,1)
  REQUIRE(cb(0, 0) == Catch::Approx(-1.0));
  REQUIRE(cb(1, 3) == Catch::Approx(1.0));

  Mat sm = agopnc::center_global(x, labels, 2, agopnc::GlobalMean::Sample);
  // sample mean = (1.5, 0.5)
  REQUIRE(sm(0, 0) == Catch::Approx(-0.5));
  REQUIRE(sm.rowwise().mean().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sorted_class_major groups samples by label") {
  Mat x(1, 4);
  x << 10, 20, 30, 40;
  Dataset ds;
  ds.x = x;
  ds.labels = {1, 0, 1, 0};
  ds.num_classes = 2;
  Dataset s = agopnc::sorted_class_major(ds);
  REQUIRE(s.labels == std::vector<int>({0, 0, 1, 1}));
  REQUIRE(s.x(0, 0) == 20.0);
  REQUIRE(s.x(0, 1) == 40.0);
  REQUIRE(s.x(0, 2) == 10.0);
  REQUIRE(s.x(0, 3) == 30.0);
}

TEST_CASE("load_idx parses hand-built files") {
  auto img_path = temp_file("ok-images.idx");
  auto lab_path = temp_file("ok-labels.idx");
  write_bytes(img_path, image_bytes(0x803, 2, 2, 2,
                                    {0, 128, 255, 64, 1, 2, 3, 4}));
  write_bytes(lab_path, label_bytes(0x801, 2, {7, 2}));

  Dataset ds = agopnc::load_idx(img_path.string(), lab_path.string(), 0);
  REQUIRE(ds.x.rows() == 4);
  REQUIRE(ds.x.cols() == 2);
  REQUIRE(ds.x(0, 0) == Catch::Approx(0.0));
  REQUIRE(ds.x(1, 0) == Catch::Approx(128.0 / 255.0));
  REQUIRE(ds.x(2, 0) == Catch::Approx(1.0));
  REQUIRE(ds.x(3, 0) == Catch::Approx(64.0 / 255.0));
  REQUIRE(ds.x(2, 1) == Catch::Approx(3.0 / 255.0));
  REQUIRE(ds.labels == std::vector<int>({7, 2}));
  REQUIRE(ds.num_classes == 8);

  Dataset one = agopnc::load_idx(img_path.string(), lab_path.string(), 1);
  REQUIRE(one.x.cols() == 1);
  REQUIRE(one.labels.size() == 1);
}

TEST_CASE("load_idx rejects malformed files") {
  auto img_path = temp_file("bad-images.idx");
  auto lab_path = temp_file("bad-labels.idx");

  // wrong magic: the error must name the offending file
  write_bytes(img_path, image_bytes(0x804, 1, 2, 2, {0, 0, 0, 0}));
  write_bytes(lab_path, label_bytes(0x801, 1, {0}));
  try {
    agopnc::load_idx(img_path.string(), lab_path.string(), 0);
    FAIL("expected magic error");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("bad-images.idx") != std::string::npos);
  }

  // truncated pixel payload
  write_bytes(img_path, image_bytes(0x803, 2, 2, 2, {0, 0, 0, 0}));
  write_bytes(lab_path, label_bytes(0x801, 2, {0, 1}));
  REQUIRE_THROWS_AS(agopnc::load_idx(img_path.string(), lab_path.string(), 0),
                    std::invalid_argument);

  // image/label count mismatch
  write_bytes(img_path, image_bytes(0x803, 1, 2, 2, {9, 9, 9, 9}));
  write_bytes(lab_path, label_bytes(0x801, 2, {0, 1}));
  REQUIRE_THROWS_AS(agopnc::load_idx(img_path.string(), lab_path.string(), 0),
                    std::invalid_argument);
}
