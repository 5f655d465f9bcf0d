// agop-collapse: deterministic feature-learning collapse toolkit.
//
// Subcommands:
//   deeprfm  --config <json> --out <dir>   recursive feature-machine pipeline
//   theory   [mode] [params]  --out <dir>  contraction / fixed-point /
//                                          kernel-opt studies
//   nn       --config <json> --out <dir>   biasless MLP collapse study
//   heatmap  --in <csv> --out <pgm>        render a Gram matrix as PGM
//
// Exit codes: 0 success, 1 configuration/validation error, 2 numerical
// failure. AGOP_COLLAPSE_THREADS overrides --threads.
#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "agopnc/cli.hpp"
#include "agopnc/runtime.hpp"

namespace {

int resolve_threads(int flag_value) {
  const char* env = std::getenv("AGOP_COLLAPSE_THREADS");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1)
      throw std::invalid_argument(
          "AGOP_COLLAPSE_THREADS must be a positive integer, got '" +
          std::string(env) + "'");
    return static_cast<int>(v);
  }
  return flag_value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic feature-learning collapse toolkit"};
  app.require_subcommand(1);

  int threads = 1;
  app.add_option("--threads", threads,
                 "worker threads; 1 selects the byte-exact reference mode")
      ->check(CLI::PositiveNumber);

  auto* deeprfm = app.add_subcommand(
      "deeprfm", "run the recursive feature-machine pipeline");
  deeprfm->fallthrough();
  std::string dr_config;
  std::string dr_out;
  deeprfm->add_option("--config", dr_config, "JSON config path");
  deeprfm->add_option("--out", dr_out, "output directory")->required();

  auto* theory =
      app.add_subcommand("theory", "idealized Gram-space recursion studies");
  theory->fallthrough();
  agopnc::cli::TheoryCommandConfig th_defaults;
  std::string th_mode;
  std::string th_config;
  std::string th_out;
  double th_lhat = th_defaults.lhat;
  double th_lmap = th_defaults.lmap;
  double th_eps = th_defaults.eps;
  double th_mu = th_defaults.mu;
  int th_n = th_defaults.n;
  int th_k = th_defaults.k;
  int th_depth = th_defaults.depth;
  int th_trials = th_defaults.trials;
  std::uint64_t th_seed = th_defaults.seed;
  theory->add_option("mode", th_mode,
                     "contraction | fixed-point | kernel-opt");
  theory->add_option("--config", th_config,
                     "JSON config path (flags override its values)");
  theory->add_option("--lhat", th_lhat, "ridge of the fitted kernel");
  theory->add_option("--lmap", th_lmap, "ridge added by the feature map");
  theory->add_option("--n", th_n, "samples per class");
  theory->add_option("--k", th_k, "number of classes");
  theory->add_option("--depth", th_depth, "recursion layers");
  theory->add_option("--eps", th_eps, "required contraction margin");
  theory->add_option("--mu", th_mu, "kernel-opt regularizer");
  theory->add_option("--trials", th_trials, "kernel-opt search trials");
  theory->add_option("--seed", th_seed, "seed for randomized pieces");
  theory->add_option("--out", th_out, "output directory")->required();

  auto* nn =
      app.add_subcommand("nn", "biasless MLP collapse and alignment study");
  nn->fallthrough();
  std::string nn_config;
  std::string nn_out;
  nn->add_option("--config", nn_config, "JSON config path");
  nn->add_option("--out", nn_out, "output directory")->required();

  auto* heatmap =
      app.add_subcommand("heatmap", "render a Gram matrix CSV as a PGM image");
  heatmap->fallthrough();
  std::string hm_in;
  std::string hm_out;
  heatmap->add_option("--in", hm_in, "headerless CSV of a square Gram matrix")
      ->required();
  heatmap->add_option("--out", hm_out, "output PGM path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  return agopnc::cli::guarded([&]() -> int {
    agopnc::set_threads(resolve_threads(threads));
    if (deeprfm->parsed())
      return agopnc::cli::run_deeprfm_command(dr_config, dr_out);
    if (theory->parsed()) {
      agopnc::cli::TheoryCommandConfig cfg;
      if (!th_config.empty())
        cfg = agopnc::cli::parse_theory_command(
            agopnc::cli::detail::load_json_file(th_config));
      if (theory->count("mode") > 0) cfg.mode = th_mode;
      if (theory->count("--lhat") > 0) cfg.lhat = th_lhat;
      if (theory->count("--lmap") > 0) cfg.lmap = th_lmap;
      if (theory->count("--n") > 0) cfg.n = th_n;
      if (theory->count("--k") > 0) cfg.k = th_k;
      if (theory->count("--depth") > 0) cfg.depth = th_depth;
      if (theory->count("--eps") > 0) cfg.eps = th_eps;
      if (theory->count("--mu") > 0) cfg.mu = th_mu;
      if (theory->count("--trials") > 0) cfg.trials = th_trials;
      if (theory->count("--seed") > 0) cfg.seed = th_seed;
      return agopnc::cli::run_theory_command(cfg, th_out);
    }
    if (nn->parsed()) return agopnc::cli::run_nn_command(nn_config, nn_out);
    return agopnc::cli::run_heatmap_command(hm_in, hm_out);
  });
}
