#include <gtest/gtest.h>

#include <sstream>

#include "latticekit/experiments.hpp"

using namespace latticekit;

namespace {

ExperimentConfig config(const std::string& id, Json params = Json::object(), std::uint64_t seed = 7) {
  ExperimentConfig c;
  c.experiment = id;
  c.parameters = std::move(params);
  c.seed = seed;
  return c;
}

int run_to_string(const ExperimentConfig& c, std::string& out, std::string& err) {
  std::ostringstream o, e;
  const int code = run(c, o, e);
  out = o.str();
  err = e.str();
  return code;
}

std::size_t column(const ExperimentResult& r, const std::string& name) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (r.columns[i] == name) return i;
  }
  throw std::runtime_error("no column " + name);
}

double number(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  return static_cast<double>(std::get<long long>(c));
}

}  // namespace

TEST(Experiments, SigmaConvergenceTable) {
  const auto r = run_experiment(config("sigma-convergence", {{"f", {1}}, {"g", {2}}, {"m", "1..10"}}));
  ASSERT_EQ(r.rows.size(), 10u);
  const auto err = column(r, "error");
  const auto bound = column(r, "bound");
  for (const auto& row : r.rows) EXPECT_LE(number(row[err]), number(row[bound]));
  EXPECT_FALSE(r.violated);
  EXPECT_DOUBLE_EQ(number(r.rows[1][column(r, "approx")]), 2.2304424973876635);
}

TEST(Experiments, VandermondeAllNonzero) {
  const auto r = run_experiment(config("vandermonde", {{"n", "2..8"}, {"draws", 100}}, 7));
  ASSERT_EQ(r.rows.size(), 700u);  // 100 draws for each n
  const auto nz = column(r, "nonzero");
  for (const auto& row : r.rows) EXPECT_TRUE(std::get<bool>(row[nz]));
}

TEST(Experiments, UnknownExperimentExitsTwo) {
  std::string out, err;
  EXPECT_EQ(run_to_string(config("no-such-thing"), out, err), kExitValidation);
  EXPECT_FALSE(err.empty());
}

TEST(Experiments, UnknownParameterExitsTwo) {
  std::string out, err;
  EXPECT_EQ(run_to_string(config("sigma-convergence", {{"bogus", 1}}), out, err), kExitValidation);
}

TEST(Experiments, SeededExperimentNeedsSeed) {
  ExperimentConfig c = config("vandermonde");
  c.seed.reset();
  std::string out, err;
  EXPECT_EQ(run_to_string(c, out, err), kExitValidation);
}

TEST(Experiments, BadFormatExitsTwo) {
  ExperimentConfig c = config("sigma-convergence");
  c.format = "xml";
  std::string out, err;
  EXPECT_EQ(run_to_string(c, out, err), kExitValidation);
}

TEST(Experiments, ConfigParsing) {
  const auto c = ExperimentConfig::from_json(Json::parse(
      R"({"experiment": "vandermonde", "parameters": {"draws": 3}, "seed": 5, "format": "json"})"));
  EXPECT_EQ(c.experiment, "vandermonde");
  EXPECT_EQ(*c.seed, 5u);
  EXPECT_EQ(c.format, "json");
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"experiment": "x", "extra": 1})")),
               ValidationError);
  ExperimentConfig d;
  d.set_parameter("m=1..4");
  d.set_parameter("f=[1,2]");
  d.set_parameter("budget=50");
  EXPECT_EQ(d.parameters["m"], "1..4");
  EXPECT_EQ(d.parameters["f"], Json::parse("[1,2]"));
  EXPECT_EQ(d.parameters["budget"], 50);
  EXPECT_THROW(d.set_parameter("novalue"), ValidationError);
}

TEST(Experiments, CsvAndJsonRendering) {
  const auto c = config("sigma-convergence", {{"m", "1..3"}});
  const auto r = run_experiment(c);
  const auto csv = render_csv(r);
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
  EXPECT_NE(csv.find("\nm,approx,exact,error,bound\n"), std::string::npos);
  const auto j = Json::parse(render_json(r, c));
  EXPECT_EQ(j["experiment"], "sigma-convergence");
  EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(Experiments, EveryExperimentIsDeterministic) {
  const Json small = {
      {"axioms", {{"samples", 50}}},
      {"sigma-convergence", Json::object()},
      {"complex-modulus", {{"dimension", 10}, {"m", "1..5"}}},
      {"de-schipper", {{"count", 5}}},
      {"vandermonde", {{"draws", 10}}},
      {"incompleteness", Json::object()},
      {"variation", {{"maps", 2}, {"budget", 100}}},
      {"s-power", {{"maps", 5}}},
      {"lbv-iso", {{"samples", 5}}},
      {"density-trace", Json::object()},
  };
  for (const auto& id : experiment_ids()) {
    ASSERT_TRUE(small.contains(id)) << id;
    for (const char* format : {"csv", "json"}) {
      auto c = config(id, small[id], 42);
      c.format = format;
      std::string a, b, err;
      EXPECT_EQ(run_to_string(c, a, err), kExitOk) << id << ": " << err;
      EXPECT_EQ(run_to_string(c, b, err), kExitOk) << id;
      EXPECT_EQ(a, b) << id;
      EXPECT_FALSE(a.empty());
    }
  }
}

TEST(Experiments, BuiltinAxiomFailureIsNotReportedForGoodCandidate) {
  const auto r = run_experiment(config("axioms", {{"candidate", "builtin"}, {"samples", 100}}));
  EXPECT_FALSE(r.violated);
  const auto bad = run_experiment(config("axioms", {{"candidate", "double"}, {"samples", 100}}));
  const auto verdict = column(bad, "verdict");
  bool some_fail = false;
  for (const auto& row : bad.rows) some_fail = some_fail || std::get<std::string>(row[verdict]) == "fail";
  EXPECT_TRUE(some_fail);
}
