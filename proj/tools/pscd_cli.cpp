// Copyright 2026 The pscd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pscd: command-line front end for training and the reference experiments.

#include <omp.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "pscd/checkpoint.hpp"
#include "pscd/csv.hpp"
#include "pscd/datasets.hpp"
#include "pscd/error.hpp"
#include "pscd/eval.hpp"
#include "pscd/experiments.hpp"
#include "pscd/trainer.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pscd;

namespace {

constexpr const char* kVersion = "0.1.0";

/// SHA-1 of "blob <size>\0<contents>", as `git hash-object` prints it.
std::string git_blob_sha1(const std::string& contents) {
  const std::string header = "blob " + std::to_string(contents.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("cli", ErrorCode::IoError, "cannot allocate a digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, contents.data(), contents.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("cli", ErrorCode::IoError, "SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

/// Output directory plus the list of files written into it.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& contents) {
    try {
      fs::create_directories(dir_);
    } catch (const fs::filesystem_error& e) {
      throw Error("cli", ErrorCode::IoError, e.what());
    }
    write_file((dir_ / name).string(), contents);
    entries_.push_back({{"path", name}, {"bytes", contents.size()}, {"sha1", git_blob_sha1(contents)}});
  }

  const fs::path& dir() const { return dir_; }
  const json& entries() const { return entries_; }

 private:
  fs::path dir_;
  json entries_ = json::array();
};

json scalar_from_string(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) {
      if (s.find_first_of(".eE") == std::string::npos && v == static_cast<double>(static_cast<long long>(v))) {
        return static_cast<long long>(v);
      }
      return v;
    }
  } catch (const std::exception&) {
  }
  return s;
}

/// Every option of the subcommand with the value it resolved to.
json resolved_options(const CLI::App& sub) {
  json out = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    auto values = opt->reduced_results();
    if (values.empty() && !opt->get_default_str().empty()) values = {opt->get_default_str()};
    if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : values) {
        if (v.front() == '[') {
          // Default strings of vector options are rendered as "[a,b]".
          std::string body = v.substr(1, v.size() - 2);
          std::size_t start = 0;
          while (start < body.size()) {
            const auto comma = body.find(',', start);
            arr.push_back(scalar_from_string(body.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
          }
        } else {
          arr.push_back(scalar_from_string(v));
        }
      }
      out[name] = arr;
    } else if (!values.empty()) {
      out[name] = scalar_from_string(values.front());
    } else if (opt->get_type_size() == 0) {
      out[name] = opt->count() > 0;
    }
  }
  return out;
}

/// Turns {"gamma": 1, "ratios": [0.1, 0.2]} into "--gamma 1 --ratios 0.1 0.2"
/// for every key not already given on the command line.
std::vector<std::string> config_tokens(const std::string& path, const std::vector<std::string>& argv) {
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error("cli", ErrorCode::ConfigError, "config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw Error("cli", ErrorCode::ConfigError, "config '" + path + "' must be a JSON object");
  std::vector<std::string> out;
  auto token = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : argv) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
      continue;
    }
    out.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) out.push_back(token(v));
    } else {
      out.push_back(token(value));
    }
  }
  return out;
}

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = "out";
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON file with option values (command-line flags win)");
  sub->add_option("--seed", c.seed, "Root seed");
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--threads", c.threads, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string dataset = "MoG2D";
  double ratio = 0.1;
  std::string model = "auto";
  std::string sampler = "auto";
  double gamma = 1.0;
  std::size_t iterations = 3000;
  std::size_t batch_size = 128;
  std::size_t n = 10000;
  double lr = 1e-3;
  std::string schedule = "Constant";
  std::string optimizer = "auto";
  double l2 = 0.1;
  std::size_t langevin_steps = 20;
  double langevin_step_size = 0.1;
  double noise = 0.005;
  std::size_t eval_every = 100;
  std::size_t eval_samples = 1000;
  std::vector<std::size_t> widths{2, 32, 32, 1};
};

void run_train(const TrainArgs& a, const Common& c, Artifacts& art) {
  const auto name = dataset_from_string(a.dataset);
  DatasetSpec spec{name, {}, a.n, derive_seed(c.seed, "cli.data")};
  if (name == DatasetName::ContaminatedGaussian) spec.params["ratio"] = a.ratio;
  const auto data = sample_dataset(spec);
  const bool one_d = data.dim() == 1;

  const std::string model_kind = a.model == "auto" ? (one_d ? "gaussian" : "mlp") : a.model;
  EnergyModel init = EnergyModel::gaussian_quadratic(0.0, 1.0);
  if (model_kind == "mlp") {
    auto widths = a.widths;
    widths.front() = data.dim();
    init = init_mlp(widths, derive_seed(c.seed, "cli.init"));
  } else if (model_kind != "gaussian") {
    throw Error("cli", ErrorCode::ConfigError, "--model must be auto, gaussian or mlp");
  }

  TrainConfig tc;
  tc.gamma = a.gamma;
  tc.batch_size = a.batch_size;
  tc.iterations = a.iterations;
  tc.schedule = ScheduleSpec{schedule_kind_from_string(a.schedule), a.lr};
  tc.l2_coeff = a.l2;
  tc.seed = derive_seed(c.seed, "cli.train");
  tc.eval_every = a.eval_every;
  tc.probe_batch = model_kind == "gaussian" ? a.batch_size : 4096;
  const std::string sampler = a.sampler == "auto" ? (model_kind == "gaussian" ? "exact" : "langevin") : a.sampler;
  if (sampler == "exact") {
    tc.sampler = ExactGaussianSampler{};
  } else if (sampler == "langevin") {
    tc.sampler = LangevinConfig{a.langevin_steps, a.langevin_step_size, a.noise,
                                ReplayBufferInit{10000, 0.05, -4.5, 4.5}};
  } else {
    throw Error("cli", ErrorCode::ConfigError, "--sampler must be auto, exact or langevin");
  }
  const std::string optimizer = a.optimizer == "auto" ? (model_kind == "mlp" ? "adam" : "sgd") : a.optimizer;
  if (optimizer != "sgd" && optimizer != "adam") throw Error("cli", ErrorCode::ConfigError, "--optimizer must be sgd or adam");
  tc.optimizer = optimizer == "adam" ? OptimizerKind::Adam : OptimizerKind::Sgd;

  TrainHooks hooks;
  if (name == DatasetName::ContaminatedGaussian && model_kind == "gaussian") {
    hooks.reference = contaminated_density(a.ratio);
    const ContaminationModel m;
    hooks.metric = [m](const EnergyModel& q) { return gaussian_kl(m.target_mean, m.target_std, q.mu(), q.sigma()); };
  } else if (name == DatasetName::MoG1D && model_kind == "gaussian") {
    hooks.reference = default_mog1d();
  }

  const auto result = train(init, data, tc, hooks);
  art.write("trace.csv", trace_csv(result.trace));
  art.write("model.json", checkpoint_json(result.model));
  art.write("model.bin", checkpoint_binary(result.model));
  if (result.buffer_states && data.dim() == 2 && result.ok()) {
    Rng rng(derive_seed(c.seed, "cli.eval"));
    const auto& buffer = *result.buffer_states;
    PointSet samples(2);
    for (std::size_t i = 0; i < a.eval_samples; ++i) samples.push_back(buffer[rng.below(buffer.size())]);
    const auto heldout = sample_dataset({name, {}, a.eval_samples, derive_seed(c.seed, "cli.heldout")});
    art.write("samples.csv", dataset_csv(samples));
    art.write("histogram.csv", histogram_csv(histogram2d(samples, 64, -4.5, 4.5)));
    art.write("metrics.csv", metrics_csv({{to_string(name), method_name(a.gamma), a.gamma, c.seed, mmd(samples, heldout)}}));
  }
  result.rethrow_if_failed();
}

// --- experiments -------------------------------------------------------------

std::string grid_name(double gamma) { return "landscape_gamma_" + format_double(gamma) + ".csv"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spherical contrastive divergence: training and reference experiments", "pscd"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Train an energy model on a dataset");
  add_common(train_cmd, common);
  train_cmd->add_option("--dataset", ta.dataset, "Dataset name");
  train_cmd->add_option("--ratio", ta.ratio, "Contamination ratio (ContaminatedGaussian)");
  train_cmd->add_option("--model", ta.model, "auto, gaussian or mlp");
  train_cmd->add_option("--sampler", ta.sampler, "auto, exact or langevin");
  train_cmd->add_option("--gamma", ta.gamma, "Score exponent; 0 trains with CD");
  train_cmd->add_option("--iterations", ta.iterations, "Parameter updates");
  train_cmd->add_option("--batch-size", ta.batch_size, "Positives and negatives per update");
  train_cmd->add_option("--n", ta.n, "Training set size");
  train_cmd->add_option("--lr", ta.lr, "Base step size of the schedule");
  train_cmd->add_option("--schedule", ta.schedule, "Step-size schedule");
  train_cmd->add_option("--optimizer", ta.optimizer, "auto, sgd or adam");
  train_cmd->add_option("--l2", ta.l2, "Energy magnitude penalty");
  train_cmd->add_option("--langevin-steps", ta.langevin_steps, "Langevin steps per update");
  train_cmd->add_option("--langevin-step-size", ta.langevin_step_size, "Langevin step size");
  train_cmd->add_option("--noise", ta.noise, "Langevin noise scale");
  train_cmd->add_option("--eval-every", ta.eval_every, "Trace cadence");
  train_cmd->add_option("--eval-samples", ta.eval_samples, "Samples written for 2-D models");
  train_cmd->add_option("--widths", ta.widths, "Mlp layer widths")->delimiter(',');

  LandscapeConfig lc;
  auto* land_cmd = app.add_subcommand("landscape", "Well-specified loss surfaces over (mu, sigma)");
  add_common(land_cmd, common);
  land_cmd->add_option("--gammas,--gamma", lc.gammas, "Exponents (0 is the log-likelihood)")->delimiter(',');
  land_cmd->add_option("--p-mean", lc.p_mean, "Data mean");
  land_cmd->add_option("--p-std", lc.p_std, "Data standard deviation");
  land_cmd->add_option("--mu-points", lc.mu_points, "Grid points in mu");
  land_cmd->add_option("--sigma-points", lc.sigma_points, "Grid points in sigma");

  ContaminationConfig cc;
  auto* cont_cmd = app.add_subcommand("contamination", "KL to the clean target after training on contaminated data");
  add_common(cont_cmd, common);
  cont_cmd->add_option("--ratios,--ratio", cc.ratios, "Contamination ratios")->delimiter(',');
  cont_cmd->add_option("--gammas,--gamma", cc.gammas, "Exponents (0 is CD)")->delimiter(',');
  cont_cmd->add_option("--iterations", cc.iterations, "Parameter updates");
  cont_cmd->add_option("--batch-size", cc.batch_size, "Batch size");
  cont_cmd->add_option("--n", cc.n, "Training set size");
  cont_cmd->add_option("--lr", cc.step_size, "Constant step size");

  MmdBenchConfig mc;
  std::vector<std::string> mmd_datasets;
  auto* mmd_cmd = app.add_subcommand("mmd-bench", "CD vs PS-CD MMD on the 2-D datasets");
  add_common(mmd_cmd, common);
  mmd_cmd->add_option("--dataset,--datasets", mmd_datasets, "Datasets (default: all six)")->delimiter(',');
  mmd_cmd->add_option("--gammas,--gamma", mc.gammas, "Exponents (0 is CD)")->delimiter(',');
  mmd_cmd->add_option("--seeds", mc.seeds, "Seeds per cell")->delimiter(',');
  mmd_cmd->add_option("--iterations", mc.iterations, "Parameter updates");
  mmd_cmd->add_option("--batch-size", mc.batch_size, "Batch size");

  EstimatorCheckConfig ec;
  auto* est_cmd = app.add_subcommand("estimator-check", "Estimator error against the exact gradient");
  add_common(est_cmd, common);
  est_cmd->add_option("--gamma", ec.gamma, "Exponent");
  est_cmd->add_option("--sizes", ec.sample_sizes, "Sample sizes")->delimiter(',');
  est_cmd->add_option("--trials", ec.trials, "Trials per size");

  SgdConvergenceConfig sc;
  auto* sgd_cmd = app.add_subcommand("sgd-convergence", "Randomized SGD gradient norms across horizons");
  add_common(sgd_cmd, common);
  sgd_cmd->add_option("--horizons", sc.horizons, "Horizons T")->delimiter(',');
  sgd_cmd->add_option("--seeds", sc.seeds, "Runs per horizon");
  sgd_cmd->add_option("--gamma", sc.gamma, "Exponent");
  sgd_cmd->add_option("--batch-size", sc.batch_size, "Batch size");

  std::string dump_name = "MoG2D";
  std::size_t dump_n = 1000;
  std::string dump_format = "csv";
  double dump_ratio = 0.1;
  auto* dump_cmd = app.add_subcommand("dump-dataset", "Write samples of a dataset");
  add_common(dump_cmd, common);
  dump_cmd->add_option("--dataset", dump_name, "Dataset name");
  dump_cmd->add_option("--n", dump_n, "Sample count");
  dump_cmd->add_option("--ratio", dump_ratio, "Contamination ratio (ContaminatedGaussian)");
  dump_cmd->add_option("--format", dump_format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  // Resolve --config before parsing so its values act as defaults.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") {
        const auto extra = config_tokens(args[i + 1], args);
        args.insert(args.end(), extra.begin(), extra.end());
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        const auto extra = config_tokens(args[i].substr(9), args);
        args.insert(args.end(), extra.begin(), extra.end());
        break;
      }
    }
  } catch (const Error& e) {
    std::cerr << "pscd: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* sub = app.get_subcommands().front();
  Artifacts art(common.out);
  if (common.threads > 0) omp_set_num_threads(common.threads);

  json manifest;
  manifest["tool"] = "pscd";
  manifest["version"] = kVersion;
  manifest["command"] = sub->get_name();
  manifest["seed"] = common.seed;
  manifest["threads"] = common.threads > 0 ? common.threads : omp_get_max_threads();
  manifest["config"] = resolved_options(*sub);

  try {
    if (sub == train_cmd) {
      run_train(ta, common, art);
    } else if (sub == land_cmd) {
      const auto result = landscape(lc);
      for (const auto& grid : result.grids) art.write(grid_name(grid.gamma), landscape_csv(grid));
      art.write("landscape_summary.csv", landscape_summary_csv(lc, result));
    } else if (sub == cont_cmd) {
      cc.seed = common.seed;
      art.write("contamination.csv", contamination_csv(contamination(cc)));
    } else if (sub == mmd_cmd) {
      if (!mmd_datasets.empty()) {
        mc.datasets.clear();
        for (const auto& d : mmd_datasets) mc.datasets.push_back(dataset_from_string(d));
      }
      std::vector<MetricRow> rows;
      for (const auto d : mc.datasets) {
        for (const double g : mc.gammas) {
          for (const auto s : mc.seeds) {
            const auto run = mmd_bench_run(mc, d, g, derive_seed(common.seed, s));
            rows.push_back({to_string(d), method_name(g), g, s, run.mmd_x1e4});
            spdlog::info("{} {} seed {}: mmd x1e4 {:.3f}", to_string(d), method_name(g), s, run.mmd_x1e4);
            if (s == mc.seeds.front()) {
              art.write("hist_" + to_string(d) + "_gamma_" + format_double(g) + ".csv",
                        histogram_csv(histogram2d(run.samples, 64, -4.5, 4.5)));
            }
          }
        }
      }
      art.write("metrics.csv", metrics_csv(rows));
    } else if (sub == est_cmd) {
      ec.seed = common.seed;
      art.write("estimator_check.csv", estimator_check_csv(estimator_check(ec)));
    } else if (sub == sgd_cmd) {
      sc.seed = common.seed;
      art.write("sgd_convergence.csv", sgd_convergence_csv(sgd_convergence(sc)));
    } else if (sub == dump_cmd) {
      DatasetSpec spec{dataset_from_string(dump_name), {}, dump_n, common.seed};
      if (spec.name == DatasetName::ContaminatedGaussian) spec.params["ratio"] = dump_ratio;
      const auto pts = sample_dataset(spec);
      if (dump_format == "csv") {
        art.write("dataset.csv", dataset_csv(pts));
      } else {
        art.write("dataset.bin", dataset_binary(pts));
      }
    }
  } catch (const Error& e) {
    json err{{"error", e.qualified_name()}, {"message", e.what()}, {"command", sub->get_name()}};
    if (const auto* d = dynamic_cast<const DivergedChain*>(&e)) err["step"] = d->step();
    try {
      art.write("error.json", err.dump(2) + "\n");
      manifest["status"] = "error";
      manifest["artifacts"] = art.entries();
      write_file((art.dir() / "manifest.json").string(), manifest.dump(2) + "\n");
    } catch (const Error&) {
    }
    std::cerr << "pscd: " << e.what() << "\n";
    return 1;
  }
  manifest["status"] = "ok";
  manifest["artifacts"] = art.entries();
  write_file((art.dir() / "manifest.json").string(), manifest.dump(2) + "\n");
  std::cout << "wrote " << art.entries().size() << " artifacts and manifest.json to " << art.dir().string() << "\n";
  return 0;
}
