// Command drivers behind the agop-collapse executable: strict JSON
// configuration parsing (unknown keys rejected by name), deterministic
// artifact emission (CSV metrics, PGM heatmaps, pipeline manifests), and a
// resolved-config echo (run.json) that reproduces the run when fed back in.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "agopnc/collapse.hpp"
#include "agopnc/dataset.hpp"
#include "agopnc/deeprfm.hpp"
#include "agopnc/features.hpp"
#include "agopnc/idx.hpp"
#include "agopnc/io.hpp"
#include "agopnc/kernels.hpp"
#include "agopnc/matrix.hpp"
#include "agopnc/mlp.hpp"
#include "agopnc/rng.hpp"
#include "agopnc/theory.hpp"

namespace agopnc::cli {

using json = nlohmann::ordered_json;

namespace detail {

inline json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " +
                                e.what());
  }
}

inline void expect_object(const json& j, const std::string& ctx) {
  if (!j.is_object())
    throw std::invalid_argument(ctx + " must be a JSON object");
}

inline void reject_unknown_keys(const json& j, const std::string& ctx,
                                std::initializer_list<const char*> allowed) {
  expect_object(j, ctx);
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument("unknown key '" + item.key() + "' in " +
                                  ctx);
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback,
           const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + ctx +
                                " has the wrong type");
  }
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " +
                                     path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// dataset source configuration, shared by the deeprfm and nn commands
// ---------------------------------------------------------------------------

struct SyntheticSpec {
  int classes = 10;
  int per_class = 50;
  int dim = 784;
  double separation = 5.0;
  double noise = 0.5;
  std::uint64_t seed = 0;
};

struct DataSpec {
  bool synthetic = true;
  SyntheticSpec syn;
  std::string images;  // idx source only
  std::string labels;  // idx source only
  int limit = 0;       // idx source only; 0 keeps every sample
};

inline DataSpec parse_data_config(const json& j, const DataSpec& defaults) {
  DataSpec out = defaults;
  detail::expect_object(j, "data");
  const std::string type = detail::field_or<std::string>(
      j, "type", defaults.synthetic ? "synthetic" : "idx", "data");
  if (type == "synthetic") {
    detail::reject_unknown_keys(j, "data",
                                {"type", "classes", "per_class", "dim",
                                 "separation", "noise", "seed"});
    out.synthetic = true;
    out.syn.classes =
        detail::field_or<int>(j, "classes", defaults.syn.classes, "data");
    out.syn.per_class =
        detail::field_or<int>(j, "per_class", defaults.syn.per_class, "data");
    out.syn.dim = detail::field_or<int>(j, "dim", defaults.syn.dim, "data");
    out.syn.separation = detail::field_or<double>(
        j, "separation", defaults.syn.separation, "data");
    out.syn.noise =
        detail::field_or<double>(j, "noise", defaults.syn.noise, "data");
    out.syn.seed = detail::field_or<std::uint64_t>(j, "seed",
                                                   defaults.syn.seed, "data");
  } else if (type == "idx") {
    detail::reject_unknown_keys(j, "data",
                                {"type", "images", "labels", "limit"});
    out.synthetic = false;
    out.images = detail::field_or<std::string>(j, "images", "", "data");
    out.labels = detail::field_or<std::string>(j, "labels", "", "data");
    out.limit = detail::field_or<int>(j, "limit", defaults.limit, "data");
    if (out.images.empty() || out.labels.empty())
      throw std::invalid_argument(
          "data: idx source requires 'images' and 'labels' paths");
  } else {
    throw std::invalid_argument("data: unknown type '" + type +
                                "' (expected synthetic or idx)");
  }
  return out;
}

inline json data_config_json(const DataSpec& d) {
  json j;
  if (d.synthetic) {
    j["type"] = "synthetic";
    j["classes"] = d.syn.classes;
    j["per_class"] = d.syn.per_class;
    j["dim"] = d.syn.dim;
    j["separation"] = d.syn.separation;
    j["noise"] = d.syn.noise;
    j["seed"] = d.syn.seed;
  } else {
    j["type"] = "idx";
    j["images"] = d.images;
    j["labels"] = d.labels;
    j["limit"] = d.limit;
  }
  return j;
}

inline Dataset load_data(const DataSpec& d) {
  if (d.synthetic)
    return gen_gaussian_classes(d.syn.classes, d.syn.per_class, d.syn.dim,
                                d.syn.separation, d.syn.noise, d.syn.seed);
  return load_idx(d.images, d.labels, d.limit);
}

// ---------------------------------------------------------------------------
// deeprfm command
// ---------------------------------------------------------------------------

struct DeepRfmCommandConfig {
  DataSpec data;
  DeepRfmConfig model;
  std::vector<int> gram_layers;  // layers rendered as centered-Gram heatmaps
};

inline DeepRfmCommandConfig parse_deep_rfm_command(const json& j) {
  detail::reject_unknown_keys(j, "config", {"data", "deeprfm", "gram_layers"});
  DeepRfmCommandConfig out;
  if (j.contains("data")) out.data = parse_data_config(j.at("data"), out.data);

  const json model = j.contains("deeprfm") ? j.at("deeprfm") : json::object();
  detail::reject_unknown_keys(model, "deeprfm",
                              {"depth", "kernel", "feature_map", "ridge",
                               "label_encoding", "master_seed"});
  out.model.depth =
      detail::field_or<int>(model, "depth", out.model.depth, "deeprfm");
  out.model.ridge =
      detail::field_or<double>(model, "ridge", out.model.ridge, "deeprfm");
  out.model.label_encoding = label_encoding_from_name(
      detail::field_or<std::string>(model, "label_encoding",
                                    label_encoding_name(
                                        out.model.label_encoding),
                                    "deeprfm"));
  out.model.master_seed = detail::field_or<std::uint64_t>(
      model, "master_seed", out.model.master_seed, "deeprfm");
  if (model.contains("kernel")) {
    const json& kj = model.at("kernel");
    detail::reject_unknown_keys(kj, "deeprfm.kernel", {"kind", "bandwidth"});
    out.model.kernel.kind = kernel_kind_from_name(detail::field_or<std::string>(
        kj, "kind", kernel_kind_name(out.model.kernel.kind),
        "deeprfm.kernel"));
    out.model.kernel.bandwidth = detail::field_or<double>(
        kj, "bandwidth", out.model.kernel.bandwidth, "deeprfm.kernel");
  }
  if (model.contains("feature_map")) {
    const json& fj = model.at("feature_map");
    detail::reject_unknown_keys(fj, "deeprfm.feature_map",
                                {"kind", "width", "bandwidth"});
    out.model.feature_map.kind =
        feature_kind_from_name(detail::field_or<std::string>(
            fj, "kind", feature_kind_name(out.model.feature_map.kind),
            "deeprfm.feature_map"));
    out.model.feature_map.width = detail::field_or<int>(
        fj, "width", out.model.feature_map.width, "deeprfm.feature_map");
    out.model.feature_map.bandwidth =
        detail::field_or<double>(fj, "bandwidth",
                                 out.model.feature_map.bandwidth,
                                 "deeprfm.feature_map");
  }
  validate_deep_rfm_config(out.model);

  out.gram_layers = detail::field_or<std::vector<int>>(
      j, "gram_layers", {out.model.depth}, "config");
  for (int l : out.gram_layers)
    if (l < 1 || l > out.model.depth)
      throw std::invalid_argument("gram_layers: layer " + std::to_string(l) +
                                  " outside [1, depth]");
  return out;
}

inline json deep_rfm_command_json(const DeepRfmCommandConfig& cfg) {
  json j;
  j["data"] = data_config_json(cfg.data);
  json model;
  model["depth"] = cfg.model.depth;
  model["kernel"] = {{"kind", kernel_kind_name(cfg.model.kernel.kind)},
                     {"bandwidth", cfg.model.kernel.bandwidth}};
  model["feature_map"] = {
      {"kind", feature_kind_name(cfg.model.feature_map.kind)},
      {"width", cfg.model.feature_map.width},
      {"bandwidth", cfg.model.feature_map.bandwidth}};
  model["ridge"] = cfg.model.ridge;
  model["label_encoding"] = label_encoding_name(cfg.model.label_encoding);
  model["master_seed"] = cfg.model.master_seed;
  j["deeprfm"] = model;
  j["gram_layers"] = cfg.gram_layers;
  return j;
}

inline std::string collapse_metrics_csv_row(int layer, const char* stage,
                                            const CollapseMetrics& m) {
  return std::to_string(layer) + "," + stage + "," + format_g17(m.nc1) + "," +
         format_g17(m.nc2_etf) + "," + format_g17(m.nc2_orth) + "," +
         format_g17(m.gram_residual) + "\n";
}

inline int run_deeprfm_command(const std::string& config_path,
                               const std::string& out_dir) {
  const json raw = config_path.empty() ? json::object()
                                       : detail::load_json_file(config_path);
  const DeepRfmCommandConfig cfg = parse_deep_rfm_command(raw);
  const Dataset ds = load_data(cfg.data);

  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);

  const DeepRfmResult result = deep_rfm_run(ds, cfg.model);

  std::string csv = "layer,stage,nc1,nc2_etf,nc2_orth,gram_residual\n";
  for (const LayerArtifacts& art : result.layers) {
    csv += collapse_metrics_csv_row(art.layer_index, "input",
                                    art.metrics_input);
    csv += collapse_metrics_csv_row(art.layer_index, "after_agop",
                                    art.metrics_after_agop);
    csv += collapse_metrics_csv_row(art.layer_index, "after_map",
                                    art.metrics_after_map);
  }
  detail::write_text_file(out / "metrics.csv", csv);

  for (int l : cfg.gram_layers) {
    const Mat gram = centered_gram(result.layers[static_cast<std::size_t>(l - 1)].xtilde,
                                   ds.labels, ds.num_classes);
    std::ofstream pgm(out / ("gram_layer" + std::to_string(l) + ".pgm"),
                      std::ios::binary);
    if (!pgm)
      throw std::runtime_error("cannot open gram heatmap for layer " +
                               std::to_string(l));
    write_pgm(pgm, gram);
  }

  save_pipeline(result.pipeline, (out / "pipeline").string());
  detail::write_text_file(out / "run.json",
                          deep_rfm_command_json(cfg).dump(2) + "\n");

  std::cout << "deeprfm: depth " << cfg.model.depth << ", final after-AGOP nc1 "
            << format_g17(result.layers.back().metrics_after_agop.nc1) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// theory command
// ---------------------------------------------------------------------------

struct TheoryCommandConfig {
  std::string mode = "contraction";  // contraction | fixed-point | kernel-opt
  double lhat = 1e-3;
  double lmap = 1.0;
  int n = 20;
  int k = 4;
  int depth = 15;
  double eps = 0.05;
  double mu = 1.0;
  int trials = 200;
  std::uint64_t seed = 0;
};

inline TheoryCommandConfig parse_theory_command(const json& j) {
  detail::reject_unknown_keys(j, "config",
                              {"mode", "lhat", "lmap", "n", "k", "depth",
                               "eps", "mu", "trials", "seed"});
  TheoryCommandConfig out;
  out.mode = detail::field_or<std::string>(j, "mode", out.mode, "config");
  out.lhat = detail::field_or<double>(j, "lhat", out.lhat, "config");
  out.lmap = detail::field_or<double>(j, "lmap", out.lmap, "config");
  out.n = detail::field_or<int>(j, "n", out.n, "config");
  out.k = detail::field_or<int>(j, "k", out.k, "config");
  out.depth = detail::field_or<int>(j, "depth", out.depth, "config");
  out.eps = detail::field_or<double>(j, "eps", out.eps, "config");
  out.mu = detail::field_or<double>(j, "mu", out.mu, "config");
  out.trials = detail::field_or<int>(j, "trials", out.trials, "config");
  out.seed = detail::field_or<std::uint64_t>(j, "seed", out.seed, "config");
  if (out.mode != "contraction" && out.mode != "fixed-point" &&
      out.mode != "kernel-opt")
    throw std::invalid_argument(
        "theory: unknown mode '" + out.mode +
        "' (expected contraction, fixed-point, or kernel-opt)");
  return out;
}

inline json theory_command_json(const TheoryCommandConfig& cfg) {
  json j;
  j["mode"] = cfg.mode;
  j["lhat"] = cfg.lhat;
  j["lmap"] = cfg.lmap;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["depth"] = cfg.depth;
  j["eps"] = cfg.eps;
  j["mu"] = cfg.mu;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  return j;
}

// deterministic strictly-positive-definite starting Gram: the label Gram
// shifted by the map ridge plus a seeded PSD perturbation
inline Mat contraction_initial_gram(const TheoryCommandConfig& cfg) {
  const Eigen::Index nn =
      static_cast<Eigen::Index>(cfg.k) * static_cast<Eigen::Index>(cfg.n);
  Rng rng(split_seed(cfg.seed, 17));
  const Mat q = gaussian_matrix(nn, nn, rng, 1.0);
  return balanced_label_gram(cfg.k, cfg.n) +
         cfg.lmap * Mat::Identity(nn, nn) +
         (q * q.transpose()) * (0.5 / static_cast<double>(nn));
}

inline int run_theory_command(const TheoryCommandConfig& cfg,
                              const std::string& out_dir) {
  if (cfg.mode != "contraction" && cfg.mode != "fixed-point" &&
      cfg.mode != "kernel-opt")
    throw std::invalid_argument(
        "theory: unknown mode '" + cfg.mode +
        "' (expected contraction, fixed-point, or kernel-opt)");
  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);

  if (cfg.mode == "contraction") {
    TheoryConfig tc;
    tc.lambda_hat = cfg.lhat;
    tc.lambda_map = cfg.lmap;
    tc.n = cfg.n;
    tc.k = cfg.k;
    tc.depth = cfg.depth;
    tc.epsilon = cfg.eps;
    tc.seed = cfg.seed;
    const ContractionTrace trace =
        contraction_run(tc, contraction_initial_gram(cfg));

    std::string csv = "layer,residual_spectral,residual_frobenius,ratio\n";
    for (std::size_t i = 0; i < trace.residual_spectral.size(); ++i) {
      csv += std::to_string(i + 1) + "," +
             format_g17(trace.residual_spectral[i]) + "," +
             format_g17(trace.residual_frobenius[i]) + ",";
      if (i > 0) csv += format_g17(trace.ratios[i - 1]);
      csv += "\n";
    }
    detail::write_text_file(out / "residuals.csv", csv);
    std::cout << (trace.pass ? "PASS" : "FAIL") << " contraction: kappa="
              << format_g17(trace.kappa)
              << " plateau_constant=" << format_g17(trace.plateau_constant)
              << " regime=" << (trace.lambda_in_regime ? "yes" : "no") << "\n";
  } else if (cfg.mode == "fixed-point") {
    const FixedPoint fp = fixed_point_inverse(cfg.n, cfg.k, cfg.lmap);
    const Eigen::Index nn = fp.astar.rows();
    const double err = (fp.astar * fp.inverse - Mat::Identity(nn, nn))
                           .cwiseAbs()
                           .maxCoeff();
    std::string csv = "n,k,lambda_map,max_inverse_error\n";
    csv += std::to_string(cfg.n) + "," + std::to_string(cfg.k) + "," +
           format_g17(cfg.lmap) + "," + format_g17(err) + "\n";
    detail::write_text_file(out / "fixed_point.csv", csv);
    std::cout << "fixed-point: max inverse error " << format_g17(err) << "\n";
  } else {
    const KernelSearchResult result =
        search_kernel_opt(cfg.k, cfg.n, cfg.mu, cfg.trials, cfg.seed);
    const double closed = result.best_gain + result.gap;
    std::string csv = "best_gain,closed_form,gap\n";
    csv += format_g17(result.best_gain) + "," + format_g17(closed) + "," +
           format_g17(result.gap) + "\n";
    detail::write_text_file(out / "kernel_opt.csv", csv);
    std::cout << "kernel-opt: best=" << format_g17(result.best_gain)
              << " closed=" << format_g17(closed)
              << " gap=" << format_g17(result.gap) << "\n";
  }

  detail::write_text_file(out / "run.json",
                          theory_command_json(cfg).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// nn command
// ---------------------------------------------------------------------------

struct NnCommandConfig {
  DataSpec data;
  std::vector<int> hidden_widths{64, 64, 64, 64};
  double init_scale = 0.3;
  double lr = 0.05;
  int epochs = 300;
  int batch_size = 16;
  int measure_every = 25;
  std::uint64_t seed = 0;
  LabelEncoding label_encoding = LabelEncoding::PmOne;
};

inline NnCommandConfig parse_nn_command(const json& j) {
  detail::reject_unknown_keys(j, "config", {"data", "mlp"});
  NnCommandConfig out;
  out.data.syn = SyntheticSpec{4, 20, 8, 4.0, 0.4, 77};
  if (j.contains("data")) out.data = parse_data_config(j.at("data"), out.data);

  const json mlp = j.contains("mlp") ? j.at("mlp") : json::object();
  detail::reject_unknown_keys(mlp, "mlp",
                              {"hidden_widths", "init_scale", "lr", "epochs",
                               "batch_size", "measure_every", "seed",
                               "label_encoding"});
  out.hidden_widths = detail::field_or<std::vector<int>>(
      mlp, "hidden_widths", out.hidden_widths, "mlp");
  if (out.hidden_widths.empty())
    throw std::invalid_argument("mlp: hidden_widths must not be empty");
  for (int w : out.hidden_widths)
    if (w < 1)
      throw std::invalid_argument("mlp: hidden widths must be >= 1");
  out.init_scale =
      detail::field_or<double>(mlp, "init_scale", out.init_scale, "mlp");
  out.lr = detail::field_or<double>(mlp, "lr", out.lr, "mlp");
  out.epochs = detail::field_or<int>(mlp, "epochs", out.epochs, "mlp");
  out.batch_size =
      detail::field_or<int>(mlp, "batch_size", out.batch_size, "mlp");
  out.measure_every =
      detail::field_or<int>(mlp, "measure_every", out.measure_every, "mlp");
  if (out.measure_every < 1)
    throw std::invalid_argument("mlp: measure_every must be >= 1");
  out.seed = detail::field_or<std::uint64_t>(mlp, "seed", out.seed, "mlp");
  out.label_encoding = label_encoding_from_name(detail::field_or<std::string>(
      mlp, "label_encoding", label_encoding_name(out.label_encoding), "mlp"));
  return out;
}

inline json nn_command_json(const NnCommandConfig& cfg) {
  json j;
  j["data"] = data_config_json(cfg.data);
  json mlp;
  mlp["hidden_widths"] = cfg.hidden_widths;
  mlp["init_scale"] = cfg.init_scale;
  mlp["lr"] = cfg.lr;
  mlp["epochs"] = cfg.epochs;
  mlp["batch_size"] = cfg.batch_size;
  mlp["measure_every"] = cfg.measure_every;
  mlp["seed"] = cfg.seed;
  mlp["label_encoding"] = label_encoding_name(cfg.label_encoding);
  j["mlp"] = mlp;
  return j;
}

inline int run_nn_command(const std::string& config_path,
                          const std::string& out_dir) {
  const json raw = config_path.empty() ? json::object()
                                       : detail::load_json_file(config_path);
  const NnCommandConfig cfg = parse_nn_command(raw);
  const Dataset ds = load_data(cfg.data);

  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);

  std::vector<int> widths;
  widths.push_back(static_cast<int>(ds.x.rows()));
  widths.insert(widths.end(), cfg.hidden_widths.begin(),
                cfg.hidden_widths.end());
  widths.push_back(ds.num_classes);

  MlpModel model = mlp_init(widths, cfg.init_scale, split_seed(cfg.seed, 1));
  const Mat y = encode_labels(ds.labels, ds.num_classes, cfg.label_encoding);
  const int hidden = hidden_layer_count(model);

  std::string csv =
      "epoch,layer,nc1_input,nc1_svt,nc1_full,nc1_phi,nfa_rho,train_loss\n";
  const auto measure = [&](int epoch, const MlpModel& m, double loss) {
    const MlpForward fwd = mlp_forward(m, ds.x);
    for (int l = 1; l <= hidden; ++l) {
      const SvdStageReport report = svd_stage_nc1(
          fwd.inputs[static_cast<std::size_t>(l - 1)],
          m.weights[static_cast<std::size_t>(l - 1)], ds.labels,
          ds.num_classes);
      const double rho = network_agop_nfa(m, ds.x, l).rho;
      csv += std::to_string(epoch) + "," + std::to_string(l) + "," +
             format_g17(report.nc1_input) + "," + format_g17(report.nc1_svt) +
             "," + format_g17(report.nc1_full) + "," +
             format_g17(report.nc1_phi) + "," + format_g17(rho) + "," +
             format_g17(loss) + "\n";
    }
  };

  measure(0, model, mlp_loss(model, ds.x, y));
  const auto history = sgd_train(
      model, ds.x, y, cfg.lr, cfg.epochs, cfg.batch_size,
      split_seed(cfg.seed, 2),
      [&](int epoch, const MlpModel& m, double loss) {
        if (epoch % cfg.measure_every == 0 || epoch == cfg.epochs)
          measure(epoch, m, loss);
      });

  detail::write_text_file(out / "metrics.csv", csv);
  detail::write_text_file(out / "run.json",
                          nn_command_json(cfg).dump(2) + "\n");
  std::cout << "nn: " << hidden << " hidden layers, final loss "
            << format_g17(history.back()) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// heatmap command
// ---------------------------------------------------------------------------

inline int run_heatmap_command(const std::string& in_csv,
                               const std::string& out_pgm) {
  std::ifstream in(in_csv, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open gram csv: " + in_csv);
  const Mat gram = read_csv_matrix(in);
  if (gram.rows() != gram.cols())
    throw std::invalid_argument("heatmap: gram matrix must be square, got " +
                                std::to_string(gram.rows()) + "x" +
                                std::to_string(gram.cols()));
  for (Eigen::Index c = 0; c < gram.cols(); ++c)
    for (Eigen::Index r = 0; r < gram.rows(); ++r)
      if (!(gram(r, c) >= -1.0 - 1e-6 && gram(r, c) <= 1.0 + 1e-6))
        throw std::invalid_argument(
            "heatmap: entry (" + std::to_string(r) + "," + std::to_string(c) +
            ") outside [-1, 1]");
  std::ofstream outf(out_pgm, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot open for writing: " + out_pgm);
  write_pgm(outf, gram);
  if (!outf) throw std::runtime_error("write failed: " + out_pgm);
  return 0;
}

// maps the library's exception taxonomy onto the stable exit-code contract:
// 0 success, 1 configuration/validation, 2 numerical/runtime
template <typename F>
int guarded(F&& body) {
  try {
    return std::forward<F>(body)();
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace agopnc::cli
