// Driver-level coverage for the command-line entry points: deterministic
// artifact bytes, strict config validation naming the offending key, the
// run.json round-trip, and the exit-code taxonomy.
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agopnc/cli.hpp"
#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("agopnc_cli_" + tag + "_" +
                      std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

const char* kSmallDeepRfmConfig = R"({
  "data": {"type": "synthetic", "classes": 3, "per_class": 8, "dim": 16,
           "separation": 4.0, "noise": 0.5, "seed": 5},
  "deeprfm": {"depth": 2,
              "kernel": {"kind": "laplace", "bandwidth": 2.0},
              "feature_map": {"kind": "relu", "width": 32},
              "ridge": 1e-3,
              "label_encoding": "pm_one",
              "master_seed": 11},
  "gram_layers": [1, 2]
})";

}  // namespace

TEST_CASE("deeprfm driver writes deterministic artifacts and a usable echo") {
  const fs::path root = temp_dir("deeprfm");
  const fs::path cfg = root / "config.json";
  write_text(cfg, kSmallDeepRfmConfig);

  const fs::path out1 = root / "run1";
  const fs::path out2 = root / "run2";
  REQUIRE(agopnc::cli::run_deeprfm_command(cfg.string(), out1.string()) == 0);
  REQUIRE(agopnc::cli::run_deeprfm_command(cfg.string(), out2.string()) == 0);

  for (const char* name :
       {"metrics.csv", "gram_layer1.pgm", "gram_layer2.pgm", "run.json"})
    REQUIRE(fs::exists(out1 / name));
  REQUIRE(fs::exists(out1 / "pipeline" / "manifest.json"));

  const std::string metrics = read_bytes(out1 / "metrics.csv");
  REQUIRE(metrics == read_bytes(out2 / "metrics.csv"));
  REQUIRE(read_bytes(out1 / "gram_layer2.pgm") ==
          read_bytes(out2 / "gram_layer2.pgm"));

  const auto lines = split_lines(metrics);
  REQUIRE(lines.size() == 1 + 2 * 3);  // header + depth layers x 3 stages
  REQUIRE(lines[0] == "layer,stage,nc1,nc2_etf,nc2_orth,gram_residual");
  REQUIRE(split_fields(lines[1])[0] == "1");
  REQUIRE(split_fields(lines[1])[1] == "input");
  REQUIRE(split_fields(lines[2])[1] == "after_agop");
  REQUIRE(split_fields(lines[3])[1] == "after_map");

  // the resolved-config echo reproduces the run byte for byte
  const fs::path out3 = root / "run3";
  REQUIRE(agopnc::cli::run_deeprfm_command((out1 / "run.json").string(),
                                           out3.string()) == 0);
  REQUIRE(read_bytes(out3 / "metrics.csv") == metrics);
  REQUIRE(read_bytes(out3 / "run.json") == read_bytes(out1 / "run.json"));

  fs::remove_all(root);
}

TEST_CASE("deeprfm driver rejects malformed configs naming the key") {
  const fs::path root = temp_dir("badcfg");
  const fs::path bad1 = root / "bad1.json";
  write_text(bad1, R"({"deeprfm": {"depht": 3}})");
  REQUIRE_THROWS_WITH(agopnc::cli::run_deeprfm_command(bad1.string(),
                                                       (root / "o").string()),
                      Catch::Matchers::ContainsSubstring("depht"));

  const fs::path bad2 = root / "bad2.json";
  write_text(bad2, R"({"data": {"type": "synthetic", "classses": 2}})");
  REQUIRE_THROWS_WITH(agopnc::cli::run_deeprfm_command(bad2.string(),
                                                       (root / "o").string()),
                      Catch::Matchers::ContainsSubstring("classses"));

  const fs::path bad3 = root / "bad3.json";
  write_text(bad3, R"({"deeprfm": {"depth": 2}, "gram_layers": [3]})");
  REQUIRE_THROWS_WITH(agopnc::cli::run_deeprfm_command(bad3.string(),
                                                       (root / "o").string()),
                      Catch::Matchers::ContainsSubstring("gram_layers"));

  REQUIRE_THROWS_AS(agopnc::cli::run_deeprfm_command(
                        (root / "missing.json").string(),
                        (root / "o").string()),
                    std::invalid_argument);
  fs::remove_all(root);
}

TEST_CASE("theory driver emits residuals, fixed-point, and kernel-opt files") {
  const fs::path root = temp_dir("theory");

  agopnc::cli::TheoryCommandConfig contraction;  // defaults: mode contraction
  const fs::path cdir = root / "contraction";
  REQUIRE(agopnc::cli::run_theory_command(contraction, cdir.string()) == 0);
  const auto rows = split_lines(read_bytes(cdir / "residuals.csv"));
  REQUIRE(rows.size() == 1 + 15);
  REQUIRE(rows[0] == "layer,residual_spectral,residual_frobenius,ratio");
  REQUIRE(split_fields(rows[1]).size() == 3);  // first layer has no ratio
  const double first = std::stod(split_fields(rows[1])[1]);
  const double last = std::stod(split_fields(rows.back())[1]);
  REQUIRE(last < 1e-3 * first);

  agopnc::cli::TheoryCommandConfig fixed_point;
  fixed_point.mode = "fixed-point";
  fixed_point.n = 7;
  fixed_point.k = 3;
  fixed_point.lmap = 0.5;
  const fs::path fdir = root / "fixed";
  REQUIRE(agopnc::cli::run_theory_command(fixed_point, fdir.string()) == 0);
  const auto frows = split_lines(read_bytes(fdir / "fixed_point.csv"));
  REQUIRE(frows.size() == 2);
  REQUIRE(std::stod(split_fields(frows[1])[3]) <= 1e-10);

  agopnc::cli::TheoryCommandConfig opt;
  opt.mode = "kernel-opt";
  opt.k = 2;
  opt.n = 2;
  opt.mu = 1.0;
  opt.trials = 5;
  opt.seed = 4;
  const fs::path odir = root / "opt";
  REQUIRE(agopnc::cli::run_theory_command(opt, odir.string()) == 0);
  const auto orows = split_lines(read_bytes(odir / "kernel_opt.csv"));
  REQUIRE(orows.size() == 2);
  const auto ofields = split_fields(orows[1]);
  REQUIRE(std::abs(std::stod(ofields[2])) <= 1e-9);  // optimum attained

  agopnc::cli::TheoryCommandConfig bad;
  bad.mode = "nonsense";
  REQUIRE_THROWS_AS(agopnc::cli::run_theory_command(bad,
                                                    (root / "b").string()),
                    std::invalid_argument);
  fs::remove_all(root);
}

TEST_CASE("theory echo round-trips through the config parser") {
  const fs::path root = temp_dir("theoryrt");
  agopnc::cli::TheoryCommandConfig cfg;
  cfg.mode = "kernel-opt";
  cfg.lhat = 2.5e-4;
  cfg.lmap = 1.75;
  cfg.n = 3;
  cfg.k = 5;
  cfg.depth = 9;
  cfg.eps = 0.125;
  cfg.mu = 0.5;
  cfg.trials = 7;
  cfg.seed = 41;
  REQUIRE(agopnc::cli::run_theory_command(cfg, root.string()) == 0);

  const auto echoed = agopnc::cli::parse_theory_command(
      agopnc::cli::detail::load_json_file((root / "run.json").string()));
  REQUIRE(echoed.mode == cfg.mode);
  REQUIRE(echoed.lhat == cfg.lhat);
  REQUIRE(echoed.lmap == cfg.lmap);
  REQUIRE(echoed.n == cfg.n);
  REQUIRE(echoed.k == cfg.k);
  REQUIRE(echoed.depth == cfg.depth);
  REQUIRE(echoed.eps == cfg.eps);
  REQUIRE(echoed.mu == cfg.mu);
  REQUIRE(echoed.trials == cfg.trials);
  REQUIRE(echoed.seed == cfg.seed);
  fs::remove_all(root);
}

TEST_CASE("nn driver measures every scheduled epoch with the trace identity") {
  const fs::path root = temp_dir("nn");
  const fs::path cfg = root / "config.json";
  write_text(cfg, R"({
    "data": {"type": "synthetic", "classes": 3, "per_class": 10, "dim": 8,
             "separation": 4.0, "noise": 0.4, "seed": 21},
    "mlp": {"hidden_widths": [16, 16], "init_scale": 0.3, "lr": 0.05,
            "epochs": 6, "batch_size": 8, "measure_every": 3, "seed": 9}
  })");

  const fs::path out1 = root / "run1";
  const fs::path out2 = root / "run2";
  REQUIRE(agopnc::cli::run_nn_command(cfg.string(), out1.string()) == 0);
  REQUIRE(agopnc::cli::run_nn_command(cfg.string(), out2.string()) == 0);

  const std::string metrics = read_bytes(out1 / "metrics.csv");
  REQUIRE(metrics == read_bytes(out2 / "metrics.csv"));

  const auto lines = split_lines(metrics);
  REQUIRE(lines[0] ==
          "epoch,layer,nc1_input,nc1_svt,nc1_full,nc1_phi,nfa_rho,train_loss");
  REQUIRE(lines.size() == 1 + 3 * 2);  // epochs {0,3,6} x 2 hidden layers
  std::vector<std::string> epochs_seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    REQUIRE(fields.size() == 8);
    epochs_seen.push_back(fields[0]);
    const double svt = std::stod(fields[3]);
    const double full = std::stod(fields[4]);
    REQUIRE(std::abs(svt - full) <= 1e-10 * std::max(1.0, std::abs(full)));
    REQUIRE(std::stod(fields[7]) > 0.0);
  }
  REQUIRE(epochs_seen ==
          std::vector<std::string>{"0", "0", "3", "3", "6", "6"});

  // echoed config reproduces the run
  const fs::path out3 = root / "run3";
  REQUIRE(agopnc::cli::run_nn_command((out1 / "run.json").string(),
                                      out3.string()) == 0);
  REQUIRE(read_bytes(out3 / "metrics.csv") == metrics);

  const fs::path bad = root / "bad.json";
  write_text(bad, R"({"mlp": {"learning_rate": 0.1}})");
  REQUIRE_THROWS_WITH(agopnc::cli::run_nn_command(bad.string(),
                                                  (root / "o").string()),
                      Catch::Matchers::ContainsSubstring("learning_rate"));
  fs::remove_all(root);
}

TEST_CASE("heatmap driver renders gram CSVs and rejects bad matrices") {
  const fs::path root = temp_dir("heatmap");
  const fs::path in = root / "gram.csv";
  write_text(in, "1,0\n-1,0.5\n");
  const fs::path out = root / "gram.pgm";
  REQUIRE(agopnc::cli::run_heatmap_command(in.string(), out.string()) == 0);
  const std::string expected = std::string("P5\n2 2\n255\n") +
                               static_cast<char>(255) + static_cast<char>(128) +
                               static_cast<char>(0) + static_cast<char>(191);
  REQUIRE(read_bytes(out) == expected);

  const fs::path rect = root / "rect.csv";
  write_text(rect, "1,0\n");
  REQUIRE_THROWS_WITH(agopnc::cli::run_heatmap_command(rect.string(),
                                                       out.string()),
                      Catch::Matchers::ContainsSubstring("square"));

  const fs::path range = root / "range.csv";
  write_text(range, "2.0\n");
  REQUIRE_THROWS_WITH(agopnc::cli::run_heatmap_command(range.string(),
                                                       out.string()),
                      Catch::Matchers::ContainsSubstring("outside"));

  REQUIRE_THROWS_AS(agopnc::cli::run_heatmap_command(
                        (root / "missing.csv").string(), out.string()),
                    std::invalid_argument);
  fs::remove_all(root);
}

TEST_CASE("guarded maps the exception taxonomy onto the exit-code contract") {
  REQUIRE(agopnc::cli::guarded([] { return 0; }) == 0);
  REQUIRE(agopnc::cli::guarded(
              []() -> int { throw agopnc::NumericalError("boom"); }) == 2);
  REQUIRE(agopnc::cli::guarded(
              []() -> int { throw std::invalid_argument("bad"); }) == 1);
  REQUIRE(agopnc::cli::guarded([]() -> int {
            const agopnc::cli::json j = agopnc::cli::json::object();
            return j.at("missing").get<int>();
          }) == 1);
  REQUIRE(agopnc::cli::guarded(
              []() -> int { throw std::runtime_error("io"); }) == 2);
}
