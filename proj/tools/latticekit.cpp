// latticekit: batch runner for the certified lattice computations.
//
//   latticekit run <config.json>
//   latticekit run --experiment <id> [--param k=v]... --seed N --out PATH --format csv|json
//
// Flags override fields of the config file. Exit status: 0 success,
// 2 validation error, 3 certified bound violated.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "latticekit/experiments.hpp"

namespace {

std::string id_list() {
  std::string out;
  for (const auto& id : latticekit::experiment_ids()) out += (out.empty() ? "" : ", ") + id;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latticekit: certified computations on concrete vector lattices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string experiment;
  std::vector<std::string> params;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format;

  auto* run = app.add_subcommand("run", "Run one experiment and write its table");
  run->add_option("config", config_path, "JSON config with experiment, parameters, seed, output, format");
  run->add_option("--experiment,-e", experiment, "Experiment id: " + id_list());
  run->add_option("--param,-p", params, "Parameter override name=value (value parsed as JSON when possible)");
  run->add_option("--seed,-s", seed, "Root seed (required for randomized experiments)");
  run->add_option("--out,-o", out_path, "Output path ('-' for standard output)");
  run->add_option("--format,-f", format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : latticekit::kExitValidation;
  }

  latticekit::ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw latticekit::ValidationError("cannot read config '" + config_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      const auto json = latticekit::Json::parse(text.str(), nullptr, false);
      if (json.is_discarded()) throw latticekit::ValidationError("config '" + config_path + "' is not valid JSON");
      config = latticekit::ExperimentConfig::from_json(json);
    }
    if (!experiment.empty()) config.experiment = experiment;
    if (config.experiment.empty()) {
      throw latticekit::ValidationError("no experiment given (config file or --experiment)");
    }
    for (const auto& p : params) config.set_parameter(p);
    if (seed) config.seed = seed;
    if (!out_path.empty()) config.output = out_path;
    if (!format.empty()) config.format = format;
  } catch (const latticekit::ValidationError& e) {
    std::cerr << "latticekit: " << e.what() << "\n";
    return latticekit::kExitValidation;
  }

  return latticekit::run(config, std::cout, std::cerr);
}
