// kquant: run named experiments and write their reports.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kquant/lab/experiments.hpp"

namespace {

int cmd_list() {
  for (const auto& e : kquant::lab::experiment_list()) std::cout << e.name << "\t" << e.description << "\n";
  return 0;
}

struct RunArgs {
  std::string experiment, config, k, out, format;
  std::optional<int> resolution;
  std::optional<long long> seed;
};

int cmd_run(const RunArgs& a) {
  using namespace kquant::lab;
  ExperimentConfig c;
  if (!a.config.empty()) c = load_config(a.config);
  if (!a.experiment.empty()) set_config_value(c, "experiment", a.experiment);
  if (!a.k.empty()) set_config_value(c, "k", a.k);
  if (a.resolution) set_config_value(c, "resolution", std::to_string(*a.resolution));
  if (a.seed) set_config_value(c, "seed", std::to_string(*a.seed));
  if (!a.out.empty()) set_config_value(c, "out", a.out);
  if (!a.format.empty()) set_config_value(c, "format", a.format);
  if (c.experiment.empty()) throw ConfigError("experiment", "no experiment given");

  const Report r = run_experiment(c);
  const std::string path = emit_report(r, c.format, c.out);
  for (const auto& v : r.verdicts) std::cout << (v.pass ? "PASS  " : "FAIL  ") << v.criterion << ": " << v.detail << "\n";
  std::cout << "report: " << path << "\n";
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for quantization of Kahler potentials on CP^1"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List experiments");
  RunArgs args;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--experiment", args.experiment, "Experiment name (see `kquant list`)");
  run->add_option("--config", args.config, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--k", args.k, "Comma-separated degrees, strictly increasing");
  run->add_option("--resolution", args.resolution, "Grid resolution");
  run->add_option("--seed", args.seed, "Random seed");
  run->add_option("--out", args.out, "Output directory");
  run->add_option("--format", args.format, "csv, json or svg");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*list) return cmd_list();
    return cmd_run(args);
  } catch (const std::exception& e) {
    std::cerr << "kquant: " << e.what() << "\n";
    return 2;
  }
}
