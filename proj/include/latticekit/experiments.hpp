#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "latticekit/error.hpp"
#include "latticekit/json_io.hpp"

namespace latticekit {

/// Bad configuration: unknown experiment or parameter, wrong type, missing seed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitBoundViolated = 3 };

struct ExperimentConfig {
  std::string experiment;
  Json parameters = Json::object();
  std::optional<std::uint64_t> seed;
  /// Empty or "-" writes to standard output.
  std::string output;
  std::string format = "csv";

  /// Accepts keys experiment, parameters, seed, output, format.
  static ExperimentConfig from_json(const Json& j);
  /// Adds "k=v"; v is read as JSON when it parses, otherwise as a string.
  void set_parameter(const std::string& assignment);
};

const std::vector<std::string>& experiment_ids();

using Cell = std::variant<long long, double, std::string, bool>;

struct ExperimentResult {
  std::string experiment;
  /// One line naming the tabulated quantities and their units.
  std::string description;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json summary = Json::object();
  bool violated = false;
  std::string violation;
};

/// Runs one experiment. Throws ValidationError on a bad configuration.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string render_csv(const ExperimentResult& result);
std::string render_json(const ExperimentResult& result, const ExperimentConfig& config);

/// Runs, writes the table, and maps the outcome to an exit code.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace latticekit
