#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "agopnc/dataset.hpp"

namespace agopnc {

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("load_idx: cannot open " + path);
  f.seekg(0, std::ios::end);
  const std::streamoff size = f.tellg();
  f.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (size > 0)
    f.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!f) throw std::invalid_argument("load_idx: read failure on " + path);
  return bytes;
}

inline std::uint32_t read_u32_be(const std::vector<std::uint8_t>& b,
                                 std::size_t at, const std::string& path) {
  if (at + 4 > b.size())
    throw std::invalid_argument("load_idx: truncated header in " + path);
  return (static_cast<std::uint32_t>(b[at]) << 24) |
         (static_cast<std::uint32_t>(b[at + 1]) << 16) |
         (static_cast<std::uint32_t>(b[at + 2]) << 8) |
         static_cast<std::uint32_t>(b[at + 3]);
}

}  // namespace detail

// Reads the classic big-endian image/label container pair (magic 0x00000803
// for images, 0x00000801 for labels). Pixels scale to [0,1] by /255; images
// flatten row-major into one column each. limit <= 0 keeps every sample.
inline Dataset load_idx(const std::string& images_path,
                        const std::string& labels_path, int limit = 0) {
  const auto img = detail::read_file_bytes(images_path);
  const auto lab = detail::read_file_bytes(labels_path);

  if (detail::read_u32_be(img, 0, images_path) != 0x00000803u)
    throw std::invalid_argument("load_idx: wrong magic in " + images_path);
  if (detail::read_u32_be(lab, 0, labels_path) != 0x00000801u)
    throw std::invalid_argument("load_idx: wrong magic in " + labels_path);

  const std::uint32_t n_img = detail::read_u32_be(img, 4, images_path);
  const std::uint32_t rows = detail::read_u32_be(img, 8, images_path);
  const std::uint32_t cols = detail::read_u32_be(img, 12, images_path);
  const std::uint32_t n_lab = detail::read_u32_be(lab, 4, labels_path);

  if (n_img != n_lab)
    throw std::invalid_argument(
        "load_idx: image/label count mismatch (" + std::to_string(n_img) +
        " vs " + std::to_string(n_lab) + ")");
  const std::size_t pixels_per = static_cast<std::size_t>(rows) * cols;
  if (pixels_per == 0 || n_img == 0)
    throw std::invalid_argument("load_idx: empty container " + images_path);
  if (img.size() < 16 + pixels_per * n_img)
    throw std::invalid_argument("load_idx: truncated pixel data in " +
                                images_path);
  if (lab.size() < 8 + n_lab)
    throw std::invalid_argument("load_idx: truncated label data in " +
                                labels_path);

  const std::uint32_t keep =
      limit > 0 ? std::min<std::uint32_t>(static_cast<std::uint32_t>(limit),
                                          n_img)
                : n_img;

  Dataset ds;
  ds.x.resize(static_cast<Eigen::Index>(pixels_per),
              static_cast<Eigen::Index>(keep));
  ds.labels.resize(keep);
  int max_label = 0;
  for (std::uint32_t i = 0; i < keep; ++i) {
    const std::size_t base = 16 + pixels_per * i;
    for (std::size_t p = 0; p < pixels_per; ++p)
      ds.x(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) =
          static_cast<double>(img[base + p]) / 255.0;
    ds.labels[i] = static_cast<int>(lab[8 + i]);
    max_label = std::max(max_label, ds.labels[i]);
  }
  ds.num_classes = max_label + 1;
  return ds;
}

}  // namespace agopnc
