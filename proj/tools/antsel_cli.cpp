// SPDX-License-Identifier: Apache-2.0
//
// antsel: channel generation and experiment runner.
//
//   antsel generate --config cfg.json --out DIR
//   antsel run --config cfg.json --experiment sweep --out results.csv
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage or configuration error.

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "antsel/config.hpp"
#include "antsel/errors.hpp"
#include "antsel/experiments.hpp"
#include "antsel/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

const std::vector<std::string> kExperiments{"sweep", "neighborhood", "subcarriers", "csi"};

struct Options {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string experiment;
  std::string json_path;
  bool timing = false;
};

antsel::ScenarioConfig load(const Options& opt) {
  auto config = antsel::load_config(opt.config_path);
  if (opt.seed) config.master_seed = *opt.seed;
  // An invalid value in the document is a configuration error, not a run failure.
  try {
    config.validate();
    config.scenario.validate();
    config.carrier.validate();
  } catch (const antsel::ParameterError& e) {
    throw antsel::FormatError(std::string("invalid config: ") + e.what());
  }
  return config;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw antsel::Error("cannot open " + path + " for writing");
  os << contents;
  if (!os) throw antsel::Error("failed writing " + path);
}

int cmd_generate(const Options& opt) {
  const auto config = load(opt);
  const auto scenario = antsel::build_scenario(config, config.user_counts.front());
  std::filesystem::create_directories(opt.out);
  const auto dir = std::filesystem::path(opt.out);
  write_file((dir / "geometry.json").string(),
             antsel::geometry_to_json(scenario.geometry).dump(2) + "\n");
  antsel::write_tensor_file((dir / "channel.bin").string(), scenario.tensor);
  std::cout << "wrote " << (dir / "geometry.json").string() << " and "
            << (dir / "channel.bin").string() << " (N_R=" << scenario.tensor.n_users()
            << ", N_T=" << scenario.tensor.n_tx() << ", c=" << scenario.tensor.n_subcarriers()
            << ")\n";
  return kExitOk;
}

int cmd_run(const Options& opt, const std::string& usage) {
  auto config = load(opt);
  const std::string experiment = opt.experiment.empty() ? config.experiment : opt.experiment;
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end()) {
    std::cerr << "unknown experiment '" << experiment << "'\n" << usage;
    return kExitUsage;
  }
  config.experiment = experiment;

  antsel::ResultTable table;
  std::optional<antsel::NeighborhoodStudy> neighborhood;
  if (experiment == "sweep") {
    table = antsel::sweep_selected_count(
        config, {antsel::Algorithm::kLocal, antsel::Algorithm::kGreedyForward,
                 antsel::Algorithm::kGreedyBackward, antsel::Algorithm::kRandom});
  } else if (experiment == "neighborhood") {
    neighborhood = antsel::sweep_neighborhood(config, config.local.k_grid);
    table = neighborhood->table;
  } else if (experiment == "subcarriers") {
    table = antsel::compare_subcarrier_policies(config).table;
  } else {
    table = antsel::csi_robustness(config, config.perturbation_magnitude,
                                   config.perturbation_seeds)
                .table;
  }

  {
    std::ofstream os(opt.out, std::ios::binary);
    if (!os) throw antsel::Error("cannot open " + opt.out + " for writing");
    antsel::write_csv(os, table, opt.timing);
  }
  if (neighborhood) {
    std::ofstream os(opt.out + ".trace.csv", std::ios::binary);
    antsel::write_trace_csv(os, *neighborhood);
  }
  if (!opt.json_path.empty()) {
    nlohmann::json doc = antsel::table_to_json(table, opt.timing);
    doc["config"] = antsel::config_to_json(config);
    write_file(opt.json_path, doc.dump(2) + "\n");
  }

  antsel::write_summary(std::cout, table);
  if (!table.failures.empty()) {
    std::cerr << table.failures.size() << " run(s) failed:\n";
    for (const auto& f : table.failures) std::cerr << "  " << f.run << ": " << f.message << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antenna selection for distributed massive MIMO"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config JSON document")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output path")->required();
    sub->add_option("--seed", opt.seed, "Override master_seed");
    sub->add_option("--threads", opt.threads, "Worker threads (does not change results)")
        ->check(CLI::PositiveNumber);
  };

  auto* generate = app.add_subcommand("generate", "Write geometry JSON and channel tensor");
  add_common(generate);
  auto* run = app.add_subcommand("run", "Run an experiment and write a CSV table");
  add_common(run);
  run->add_option("--experiment", opt.experiment, "sweep | neighborhood | subcarriers | csi");
  run->add_option("--json", opt.json_path, "Also write a JSON mirror with the config embedded");
  run->add_flag("--timing", opt.timing, "Record measured wall times in the outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (opt.threads) omp_set_num_threads(*opt.threads);

  try {
    if (generate->parsed()) return cmd_generate(opt);
    return cmd_run(opt, run->help());
  } catch (const antsel::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
