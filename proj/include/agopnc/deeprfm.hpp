#pragma once

// Layerwise feature-learning pipeline: per layer, column-normalize the data,
// fit kernel ridge regression, form the averaged gradient outer product and
// its PSD square root, reproject the data through that square root, and
// apply a fresh random feature map. After the last layer the normalized features
// get a final ridge fit. Prediction replays the stored maps; pipelines
// serialize to a JSON manifest plus raw little-endian matrix blobs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "agopnc/collapse.hpp"
#include "agopnc/dataset.hpp"
#include "agopnc/features.hpp"
#include "agopnc/io.hpp"
#include "agopnc/kernels.hpp"
#include "agopnc/linalg.hpp"
#include "agopnc/matrix.hpp"
#include "agopnc/rng.hpp"

namespace agopnc {

struct DeepRfmConfig {
  int depth = 20;
  KernelSpec kernel{KernelKind::Laplace, 2.0};
  FeatureMapSpec feature_map{FeatureKind::Relu, 1024, 0.05, 0};
  double ridge = 0.0;
  LabelEncoding label_encoding = LabelEncoding::PmOne;
  std::uint64_t master_seed = 0;
};

inline void validate_deep_rfm_config(const DeepRfmConfig& cfg) {
  if (cfg.depth < 1)
    throw std::invalid_argument("deep rfm config: depth must be >= 1");
  if (!(cfg.ridge >= 0.0))
    throw std::invalid_argument("deep rfm config: ridge must be >= 0");
  if (!(cfg.kernel.bandwidth > 0.0))
    throw std::invalid_argument("deep rfm config: kernel bandwidth must be > 0");
  if (cfg.feature_map.width < 1)
    throw std::invalid_argument("deep rfm config: feature width must be >= 1");
  if (!(cfg.feature_map.bandwidth > 0.0))
    throw std::invalid_argument(
        "deep rfm config: feature bandwidth must be > 0");
}

// each layer draws its random features from a seed derived from the master
// seed and the 1-based layer index, so inference can replay the exact maps
inline std::uint64_t layer_feature_seed(std::uint64_t master_seed,
                                        int layer_index) {
  return split_seed(master_seed, static_cast<std::uint64_t>(layer_index));
}

inline std::vector<int> argmax_columns(const Mat& scores) {
  std::vector<int> picks(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    int best = 0;
    for (int c = 1; c < scores.rows(); ++c)
      if (scores(c, j) > scores(best, j)) best = c;
    picks[static_cast<std::size_t>(j)] = best;
  }
  return picks;
}

namespace detail {

inline std::vector<int> labels_from_encoding(const Mat& y) {
  return argmax_columns(y);
}

}  // namespace detail

struct LayerArtifacts {
  int layer_index = 0;
  Mat xl;         // layer input after column normalization
  Mat agop;       // averaged gradient outer product of the layer's fit
  Mat sqrt_agop;  // its PSD square root
  Mat xtilde;     // sqrt_agop * xl
  Mat xnext;      // random feature map applied to xtilde
  CollapseMetrics metrics_input;
  CollapseMetrics metrics_after_agop;
  CollapseMetrics metrics_after_map;
};

inline LayerArtifacts layer_step(const Mat& x, const Mat& y,
                                 const DeepRfmConfig& cfg, int layer_index) {
  validate_deep_rfm_config(cfg);
  if (y.cols() != x.cols())
    throw std::invalid_argument("layer_step: label width mismatch");
  const int k = static_cast<int>(y.rows());
  const std::vector<int> labels = detail::labels_from_encoding(y);

  LayerArtifacts art;
  art.layer_index = layer_index;
  art.xl = column_normalize(x);
  const KrrModel model = krr_fit(cfg.kernel, art.xl, y, cfg.ridge);
  art.agop = agop(model, art.xl);
  art.sqrt_agop = psd_sqrt(art.agop);
  art.xtilde = art.sqrt_agop * art.xl;
  FeatureMapSpec spec = cfg.feature_map;
  spec.seed = layer_feature_seed(cfg.master_seed, layer_index);
  art.xnext = apply_feature_map(spec, art.xtilde);

  art.metrics_input = collapse_metrics(art.xl, labels, k);
  art.metrics_after_agop = collapse_metrics(art.xtilde, labels, k);
  art.metrics_after_map = collapse_metrics(art.xnext, labels, k);
  return art;
}

struct DeepRfmPipeline {
  DeepRfmConfig config;
  std::vector<Mat> sqrt_agops;  // one per layer, in layer order
  KrrModel final_model;         // fitted on the normalized final features
};

struct DeepRfmResult {
  std::vector<LayerArtifacts> layers;
  DeepRfmPipeline pipeline;
};

inline DeepRfmResult deep_rfm_run(const Dataset& ds,
                                  const DeepRfmConfig& cfg) {
  validate_deep_rfm_config(cfg);
  validate_dataset(ds, "deep_rfm_run");
  const Mat y = encode_labels(ds.labels, ds.num_classes, cfg.label_encoding);

  DeepRfmResult out;
  out.pipeline.config = cfg;
  out.pipeline.sqrt_agops.reserve(static_cast<std::size_t>(cfg.depth));
  Mat x = ds.x;
  for (int l = 1; l <= cfg.depth; ++l) {
    LayerArtifacts art = layer_step(x, y, cfg, l);
    x = art.xnext;
    out.pipeline.sqrt_agops.push_back(art.sqrt_agop);
    out.layers.push_back(std::move(art));
  }
  const Mat x_final = column_normalize(x);
  out.pipeline.final_model = krr_fit(cfg.kernel, x_final, y, cfg.ridge);
  return out;
}

// classify columns of z by replaying normalization, the stored square-root
// reprojections, and the seeded feature maps, then the final kernel fit;
// ties resolve to the lowest class index
inline std::vector<int> deep_rfm_predict(const DeepRfmPipeline& pipeline,
                                         const Mat& z) {
  if (pipeline.sqrt_agops.empty())
    throw std::invalid_argument("deep_rfm_predict: pipeline has no layers");
  if (z.rows() != pipeline.sqrt_agops.front().cols())
    throw std::invalid_argument("deep_rfm_predict: input dimension mismatch");
  Mat x = z;
  for (std::size_t l = 0; l < pipeline.sqrt_agops.size(); ++l) {
    x = column_normalize(x);
    x = pipeline.sqrt_agops[l] * x;
    FeatureMapSpec spec = pipeline.config.feature_map;
    spec.seed = layer_feature_seed(pipeline.config.master_seed,
                                   static_cast<int>(l) + 1);
    x = apply_feature_map(spec, x);
  }
  x = column_normalize(x);
  return argmax_columns(krr_predict(pipeline.final_model, x));
}

namespace detail {

inline std::string layer_blob_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "layer_%03d.bin", index);
  return buf;
}

inline void write_blob(const std::filesystem::path& dir,
                       const std::string& name, const Mat& m) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out)
    throw std::runtime_error("save_pipeline: cannot open " + name);
  write_matrix_le(out, m);
}

inline Mat read_blob(const std::filesystem::path& dir, const std::string& name,
                     Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(dir / name, std::ios::binary);
  if (!in)
    throw std::invalid_argument("load_pipeline: missing blob " + name);
  return read_matrix_le(in, rows, cols, name);
}

}  // namespace detail

inline void save_pipeline(const DeepRfmPipeline& pipeline,
                          const std::string& dir_path) {
  namespace fs = std::filesystem;
  const fs::path dir(dir_path);
  fs::create_directories(dir);

  nlohmann::json manifest;
  manifest["format"] = "agop-collapse-pipeline";
  manifest["version"] = 1;
  const DeepRfmConfig& cfg = pipeline.config;
  manifest["config"] = {
      {"depth", cfg.depth},
      {"kernel",
       {{"kind", kernel_kind_name(cfg.kernel.kind)},
        {"bandwidth", cfg.kernel.bandwidth}}},
      {"feature_map",
       {{"kind", feature_kind_name(cfg.feature_map.kind)},
        {"width", cfg.feature_map.width},
        {"bandwidth", cfg.feature_map.bandwidth}}},
      {"ridge", cfg.ridge},
      {"label_encoding", label_encoding_name(cfg.label_encoding)},
      {"master_seed", cfg.master_seed}};

  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < pipeline.sqrt_agops.size(); ++l) {
    const Mat& m = pipeline.sqrt_agops[l];
    const std::string name = detail::layer_blob_name(static_cast<int>(l) + 1);
    layers.push_back({{"index", l + 1},
                      {"rows", m.rows()},
                      {"cols", m.cols()},
                      {"file", name}});
    detail::write_blob(dir, name, m);
  }
  manifest["layers"] = layers;

  const KrrModel& fin = pipeline.final_model;
  manifest["final"] = {
      {"alpha",
       {{"rows", fin.alpha.rows()}, {"cols", fin.alpha.cols()},
        {"file", "final_alpha.bin"}}},
      {"train",
       {{"rows", fin.train_x.rows()}, {"cols", fin.train_x.cols()},
        {"file", "final_train.bin"}}},
      {"jitter_used", fin.jitter_used}};
  detail::write_blob(dir, "final_alpha.bin", fin.alpha);
  detail::write_blob(dir, "final_train.bin", fin.train_x);

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out)
    throw std::runtime_error("save_pipeline: cannot open manifest.json");
  out << manifest.dump(2) << "\n";
}

inline DeepRfmPipeline load_pipeline(const std::string& dir_path) {
  namespace fs = std::filesystem;
  const fs::path dir(dir_path);
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in)
    throw std::invalid_argument("load_pipeline: missing manifest.json in " +
                                dir_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("load_pipeline: bad manifest: ") +
                                e.what());
  }
  try {
    if (manifest.at("format") != "agop-collapse-pipeline" ||
        manifest.at("version") != 1)
      throw std::invalid_argument(
          "load_pipeline: unrecognized manifest format");

    DeepRfmPipeline pipeline;
    const auto& jc = manifest.at("config");
    pipeline.config.depth = jc.at("depth").get<int>();
    pipeline.config.kernel.kind =
        kernel_kind_from_name(jc.at("kernel").at("kind").get<std::string>());
    pipeline.config.kernel.bandwidth =
        jc.at("kernel").at("bandwidth").get<double>();
    pipeline.config.feature_map.kind = feature_kind_from_name(
        jc.at("feature_map").at("kind").get<std::string>());
    pipeline.config.feature_map.width =
        jc.at("feature_map").at("width").get<int>();
    pipeline.config.feature_map.bandwidth =
        jc.at("feature_map").at("bandwidth").get<double>();
    pipeline.config.ridge = jc.at("ridge").get<double>();
    pipeline.config.label_encoding = label_encoding_from_name(
        jc.at("label_encoding").get<std::string>());
    pipeline.config.master_seed = jc.at("master_seed").get<std::uint64_t>();
    validate_deep_rfm_config(pipeline.config);

    for (const auto& jl : manifest.at("layers")) {
      pipeline.sqrt_agops.push_back(
          detail::read_blob(dir, jl.at("file").get<std::string>(),
                            jl.at("rows").get<Eigen::Index>(),
                            jl.at("cols").get<Eigen::Index>()));
    }
    if (pipeline.sqrt_agops.size() !=
        static_cast<std::size_t>(pipeline.config.depth))
      throw std::invalid_argument("load_pipeline: layer count mismatch");

    const auto& jf = manifest.at("final");
    pipeline.final_model.spec = pipeline.config.kernel;
    pipeline.final_model.ridge = pipeline.config.ridge;
    pipeline.final_model.jitter_used = jf.at("jitter_used").get<double>();
    pipeline.final_model.alpha =
        detail::read_blob(dir, jf.at("alpha").at("file").get<std::string>(),
                          jf.at("alpha").at("rows").get<Eigen::Index>(),
                          jf.at("alpha").at("cols").get<Eigen::Index>());
    pipeline.final_model.train_x =
        detail::read_blob(dir, jf.at("train").at("file").get<std::string>(),
                          jf.at("train").at("rows").get<Eigen::Index>(),
                          jf.at("train").at("cols").get<Eigen::Index>());
    return pipeline;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("load_pipeline: bad manifest: ") +
                                e.what());
  }
}

}  // namespace agopnc
