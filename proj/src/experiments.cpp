#include "latticekit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace latticekit {

namespace {

// Default grid for the incompleteness experiment: spread so that every 5 x 5
// sub-box of the radial samples stays numerically full rank at 1e-8.
const std::vector<double> kSpreadX{1.0, 1.76, 2.95, 3.96, 5.36, 6.91, 8.87, 12.61, 22.86, 37.0};
const std::vector<double> kSpreadY{1.0, 1.78, 2.98, 4.01, 5.39, 6.84, 8.79, 12.39, 22.86, 36.64};

class Params {
 public:
  Params(const Json& params, std::set<std::string> allowed, const std::string& experiment)
      : params_(params), experiment_(experiment) {
    if (!params_.is_object()) throw ValidationError("parameters must be a JSON object");
    for (const auto& [key, value] : params_.items()) {
      if (!allowed.count(key)) {
        throw ValidationError("unknown parameter '" + key + "' for experiment '" + experiment + "'");
      }
    }
  }

  double number(const std::string& name, double fallback) {
    double v = fallback;
    if (params_.contains(name)) {
      const auto& j = params_.at(name);
      if (!j.is_number()) fail(name, "a number");
      v = j.get<double>();
    }
    resolved_[name] = v;
    return v;
  }

  long long integer(const std::string& name, long long fallback, long long min) {
    long long v = fallback;
    if (params_.contains(name)) v = as_integer(name, params_.at(name));
    if (v < min) {
      throw ValidationError("parameter '" + name + "' must be >= " + std::to_string(min));
    }
    resolved_[name] = v;
    return v;
  }

  std::vector<double> numbers(const std::string& name, std::vector<double> fallback) {
    std::vector<double> v = std::move(fallback);
    if (params_.contains(name)) {
      const auto& j = params_.at(name);
      if (j.is_number()) {
        v = {j.get<double>()};
      } else if (j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_number(); })) {
        v = j.get<std::vector<double>>();
      } else {
        fail(name, "a number or a list of numbers");
      }
    }
    if (v.empty()) throw ValidationError("parameter '" + name + "' must be non-empty");
    resolved_[name] = v;
    return v;
  }

  std::vector<std::vector<double>> lists(const std::string& name,
                                         std::vector<std::vector<double>> fallback) {
    auto v = std::move(fallback);
    if (params_.contains(name)) {
      try {
        v = params_.at(name).get<std::vector<std::vector<double>>>();
      } catch (const nlohmann::json::exception&) {
        fail(name, "a list of lists of numbers");
      }
    }
    if (v.empty()) throw ValidationError("parameter '" + name + "' must be non-empty");
    resolved_[name] = v;
    return v;
  }

  /// An integer, a list of integers, or a "lo..hi" range.
  std::vector<long long> range(const std::string& name, long long lo, long long hi, long long min) {
    std::vector<long long> v;
    if (!params_.contains(name)) {
      for (long long x = lo; x <= hi; ++x) v.push_back(x);
    } else {
      const auto& j = params_.at(name);
      if (j.is_string()) {
        const auto text = j.get<std::string>();
        const auto dots = text.find("..");
        if (dots == std::string::npos) fail(name, "a range 'lo..hi'");
        long long a = 0;
        long long b = 0;
        try {
          std::size_t used_a = 0;
          std::size_t used_b = 0;
          a = std::stoll(text.substr(0, dots), &used_a);
          b = std::stoll(text.substr(dots + 2), &used_b);
          if (used_a != dots || used_b != text.size() - dots - 2) fail(name, "a range 'lo..hi'");
        } catch (const std::logic_error&) {
          fail(name, "a range 'lo..hi'");
        }
        if (b < a) fail(name, "a non-empty range");
        for (long long x = a; x <= b; ++x) v.push_back(x);
      } else if (j.is_array()) {
        for (const auto& x : j) v.push_back(as_integer(name, x));
      } else {
        v.push_back(as_integer(name, j));
      }
    }
    if (v.empty()) throw ValidationError("parameter '" + name + "' must be non-empty");
    for (auto x : v) {
      if (x < min) throw ValidationError("parameter '" + name + "' must be >= " + std::to_string(min));
    }
    resolved_[name] = v;
    return v;
  }

  std::vector<long long> integers(const std::string& name, std::vector<long long> fallback,
                                  long long min) {
    if (has(name)) return range(name, 0, 0, min);
    resolved_[name] = fallback;
    return fallback;
  }

  std::string text(const std::string& name, const std::string& fallback,
                   const std::set<std::string>& choices) {
    std::string v = fallback;
    if (params_.contains(name)) {
      if (!params_.at(name).is_string()) fail(name, "a string");
      v = params_.at(name).get<std::string>();
    }
    if (!choices.count(v)) {
      std::string list;
      for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
      throw ValidationError("parameter '" + name + "' must be one of: " + list);
    }
    resolved_[name] = v;
    return v;
  }

  bool has(const std::string& name) const { return params_.contains(name); }
  const Json& resolved() const { return resolved_; }

 private:
  [[noreturn]] void fail(const std::string& name, const std::string& expected) const {
    throw ValidationError("parameter '" + name + "' for experiment '" + experiment_ +
                          "' must be " + expected);
  }

  long long as_integer(const std::string& name, const Json& j) const {
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_number_float()) {
      const double d = j.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    fail(name, "an integer");
  }

  const Json& params_;
  std::string experiment_;
  Json resolved_ = Json::object();
};

std::uint64_t require_seed(const ExperimentConfig& config) {
  if (!config.seed) {
    throw ValidationError("experiment '" + config.experiment + "' is randomized and needs a seed");
  }
  return *config.seed;
}

// Independent stream per (seed, index), so rows do not depend on each other.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> uniform_vector(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void flag(ExperimentResult& result, const std::string& message) {
  if (!result.violated) result.violation = message;
  result.violated = true;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Experiments -------------------------------------------------------------------

ExperimentResult axioms_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"candidate", "field", "dimension", "samples", "tolerance", "depth"},
           config.experiment);
  const auto candidate = p.text("candidate", "builtin", {"builtin", "identity", "double"});
  const auto field = field_from_string(p.text("field", "real", {"real", "complex"}));
  const auto dim = static_cast<std::size_t>(p.integer("dimension", 4, 1));
  const auto samples = static_cast<std::size_t>(p.integer("samples", 1000, 1));
  const double rel = p.number("tolerance", 1e-12);
  const auto depth = static_cast<std::size_t>(p.integer("depth", 100, 1));
  const auto seed = require_seed(config);

  ModulusMap m = builtin_modulus();
  if (candidate == "identity") m = [](const LatticeElement& f) { return f; };
  if (candidate == "double") m = [](const LatticeElement& f) { return 2.0 * modulus(f); };

  const Backend backend = Backend::coordinate(dim, field);
  const Tolerance tol{rel, 0.0};
  auto reports = check_modulus_axioms(m, backend, samples, tol, seed);

  auto rng = stream(seed, 1);
  const auto f = LatticeElement::real(std::vector<double>(dim, 1.0));
  const auto g = LatticeElement::real(uniform_vector(dim, -10.0, 10.0, rng));
  reports.push_back(check_archimedean(m, f, g, depth, tol));

  ExperimentResult result;
  result.description =
      "modulus axiom checks; max_residual = largest axiom residual (units of the sampled "
      "entries, entries uniform in [-10,10]); verdict pass/fail";
  result.columns = {"candidate", "axiom", "verdict", "max_residual", "samples"};
  Json reports_json = Json::array();
  for (const auto& r : reports) {
    result.rows.push_back({candidate, to_string(r.axiom), to_string(r.verdict), r.max_residual,
                           static_cast<long long>(r.samples)});
    reports_json.push_back(to_json(r));
    if (candidate == "builtin" && r.verdict == Verdict::fail) {
      flag(result, "built-in modulus fails " + to_string(r.axiom));
    }
  }
  result.summary["reports"] = reports_json;
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult sigma_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"f", "g", "m", "budget"}, config.experiment);
  const auto f = p.numbers("f", {1.0});
  const auto g = p.numbers("g", {2.0});
  const auto depths = p.range("m", 1, 10, 1);
  const auto budget = static_cast<std::size_t>(p.integer("budget", kDefaultGridBudget, 1));
  if (f.size() != g.size()) throw ValidationError("parameters 'f' and 'g' must have equal length");

  const auto fe = LatticeElement::real(f);
  const auto ge = LatticeElement::real(g);
  const std::vector<TrigTerm> terms{TrigTerm(fe, {Trig::cos}), TrigTerm(ge, {Trig::sin})};
  const auto exact = trig_sup_closed_form(terms);

  ExperimentResult result;
  result.description =
      "sup of f cos(t) + g sin(t) over t in [0,pi/2]; approx = dyadic-grid join at depth m; "
      "exact = closed form; error = exact - approx; bound = pi/2^m * sum p_k|u_k| "
      "(units of f and g)";
  result.columns = {"m", "approx", "exact", "error", "bound"};
  for (auto m : depths) {
    const auto cert = sigma_m(terms, static_cast<int>(m), budget);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double approx = cert.approximant.re()[i];
      const double error = exact.re()[i] - approx;
      const double bound = cert.error_bound.re()[i];
      const double slack = 1e-12 * (std::abs(f[i]) + std::abs(g[i]));
      result.rows.push_back({m, approx, exact.re()[i], error, bound});
      if (error < -slack || error > bound + slack) {
        flag(result, "sigma_m error outside [0, bound] at m = " + std::to_string(m));
      }
    }
  }
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult complex_modulus_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"re", "im", "dimension", "m"}, config.experiment);
  std::vector<double> re;
  std::vector<double> im;
  if (p.has("re") || p.has("im")) {
    re = p.numbers("re", {0.0});
    im = p.numbers("im", std::vector<double>(re.size(), 0.0));
    if (re.size() != im.size()) throw ValidationError("parameters 're' and 'im' must have equal length");
  } else {
    const auto dim = static_cast<std::size_t>(p.integer("dimension", 100, 1));
    auto rng = stream(require_seed(config), 0);
    re = uniform_vector(dim, -10.0, 10.0, rng);
    im = uniform_vector(dim, -10.0, 10.0, rng);
  }
  const auto depths = p.range("m", 1, 12, 1);
  for (auto m : depths) {
    if (m > 20) throw ValidationError("parameter 'm' must be <= 20");
  }

  const ComplexPair z(LatticeElement::real(re), LatticeElement::real(im));
  const auto exact = complex_modulus_exact(z);

  ExperimentResult result;
  result.description =
      "complex modulus |f+ig| as a sup over theta in [0,2pi]; columns are coordinate means; "
      "error = exact - grid approx; bound = pi/2^m * (|f|+|g|); shrink = previous mean error / "
      "mean error (units of f and g)";
  result.columns = {"m", "mean_approx", "mean_exact", "mean_error", "mean_bound",
                    "max_error_over_bound", "shrink"};
  double previous = 0.0;
  for (std::size_t k = 0; k < depths.size(); ++k) {
    const auto cert = complex_modulus_theta(z, static_cast<int>(depths[k]));
    std::vector<double> error(re.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) {
      error[i] = exact.re()[i] - cert.approximant.re()[i];
      const double bound = cert.error_bound.re()[i];
      if (bound > 0.0) worst = std::max(worst, error[i] / bound);
      if (error[i] < -1e-12 * exact.re()[i] || error[i] > bound) {
        flag(result, "complex modulus gap outside [0, bound] at m = " + std::to_string(depths[k]));
      }
    }
    const double mean_error = mean(error);
    Cell shrink = std::string();
    if (k > 0 && mean_error > 0.0) shrink = previous / mean_error;
    result.rows.push_back({depths[k], mean(cert.approximant.re()), mean(exact.re()), mean_error,
                           mean(cert.error_bound.re()), worst, shrink});
    previous = mean_error;
  }
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult de_schipper_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"count", "max-dim", "m"}, config.experiment);
  const auto count = p.integer("count", 100, 1);
  const auto max_dim = p.integer("max-dim", 6, 1);
  const auto m = p.integer("m", 10, 1);
  if (m > 20) throw ValidationError("parameter 'm' must be <= 20");
  const auto seed = require_seed(config);

  ExperimentResult result;
  result.description =
      "entrywise |t_jk| of random complex matrices against the theta-grid sup of "
      "Re(exp(-i theta) T); max_error = largest |t_jk| - sup; ratio = error / (pi/2^m |t_jk|)";
  result.columns = {"matrix", "rows", "cols", "max_error", "max_error_over_bound", "holds"};
  for (long long k = 0; k < count; ++k) {
    auto rng = stream(seed, static_cast<std::uint64_t>(k));
    std::uniform_int_distribution<long long> dim(1, max_dim);
    const auto rows = static_cast<std::size_t>(dim(rng));
    const auto cols = static_cast<std::size_t>(dim(rng));
    std::vector<Complex> entries;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t e = 0; e < rows * cols; ++e) {
      const double a = u(rng);
      entries.emplace_back(a, u(rng));
    }
    const auto cert =
        de_schipper_check(MultilinearMap::complex_matrix(rows, cols, entries), static_cast<int>(m));
    double ratio = 0.0;
    for (std::size_t e = 0; e < cert.magnitude.size(); ++e) {
      if (cert.gap_bound[e] > 0.0) {
        ratio = std::max(ratio, (cert.magnitude[e] - cert.theta_sup[e]) / cert.gap_bound[e]);
      }
    }
    result.rows.push_back({k, static_cast<long long>(rows), static_cast<long long>(cols),
                           cert.max_gap, ratio, cert.holds()});
    if (!cert.holds()) flag(result, "theta-grid sup outside the certified band for matrix " + std::to_string(k));
  }
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult vandermonde_experiment(const ExperimentConfig& config) {
  Params p(config.parameters,
           {"n", "draws", "alpha-min", "alpha-max", "x-min", "x-max", "tolerance"},
           config.experiment);
  const auto sizes = p.range("n", 2, 8, 1);
  const auto draws = p.integer("draws", 100, 1);
  const double alpha_min = p.number("alpha-min", 0.1);
  const double alpha_max = p.number("alpha-max", 10.0);
  const double x_min = p.number("x-min", 0.1);
  const double x_max = p.number("x-max", 10.0);
  const double tolerance = p.number("tolerance", 1e-9);
  if (!(alpha_min > 0.0 && alpha_max > alpha_min && x_min > 0.0 && x_max > x_min)) {
    throw ValidationError("sampling ranges must satisfy 0 < min < max");
  }
  const auto seed = require_seed(config);

  ExperimentResult result;
  result.description =
      "det of B_ij = (x^2+alpha_j^2)^-(i-1) by LU (50-digit) and by the closed product "
      "formula; relative_gap = |direct - product| / |product| (dimensionless)";
  result.columns = {"n", "draw", "x", "det_direct", "det_product", "relative_gap", "nonzero"};
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (long long d = 0; d < draws; ++d) {
      auto rng = stream(seed, (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(d));
      std::uniform_real_distribution<double> ux(x_min, x_max);
      std::uniform_real_distribution<double> ua(alpha_min, alpha_max);
      const double x = ux(rng);
      std::optional<VandermondeCertificate> cert;
      while (!cert) {
        std::vector<double> alphas(static_cast<std::size_t>(sizes[s]));
        for (auto& a : alphas) a = ua(rng);
        try {
          cert = vandermonde_certificate(x, alphas);
        } catch (const DegenerateInput&) {
          // repeated alpha^2: redraw
        }
      }
      const double gap = cert->relative_gap();
      result.rows.push_back({sizes[s], d, x, cert->det_direct, cert->det_product_formula, gap,
                             cert->nonzero});
      if (!cert->nonzero || !(gap <= tolerance)) {
        flag(result, "Vandermonde routes disagree or vanish at n = " + std::to_string(sizes[s]));
      }
    }
  }
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult incompleteness_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"x", "y", "r", "box", "tolerance"}, config.experiment);
  const auto x = p.numbers("x", kSpreadX);
  const auto y = p.numbers("y", kSpreadY);
  const auto r = static_cast<std::size_t>(p.integer("r", 3, 1));
  const auto box = static_cast<std::size_t>(p.integer("box", 5, 1));
  const double tolerance = p.number("tolerance", 1e-8);
  const auto seed = require_seed(config);

  const auto report = incompleteness_witness(x, y, r, box, tolerance, seed);

  ExperimentResult result;
  result.description =
      "numerical slice rank (singular values above tolerance * largest) of sqrt(x^2+y^2) "
      "samples and of a random sum of r pure tensors, on the full grid and on every box";
  result.columns = {"surface", "grid_size", "sub_box", "rank", "tolerance"};
  const std::string grid_size = std::to_string(x.size()) + "x" + std::to_string(y.size());
  auto add = [&](const char* surface, const std::string& where, std::size_t rank) {
    result.rows.push_back({std::string(surface), grid_size, where, static_cast<long long>(rank),
                           tolerance});
  };
  auto box_name = [](const SubBox& b) {
    return std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + "@" +
           std::to_string(b.row_begin) + ":" + std::to_string(b.col_begin);
  };
  add("radial", "full", report.radial.numerical_rank);
  for (const auto& b : report.radial_boxes) add("radial", box_name(b.box), b.rank);
  add("comparator", "full", report.comparator.numerical_rank);
  for (const auto& b : report.comparator_boxes) add("comparator", box_name(b.box), b.rank);
  if (!report.comparator_within_bound()) flag(result, "a sum of r pure tensors exceeded rank r");
  if (report.radial.numerical_rank <= r) {
    flag(result, "radial samples do not separate from r pure tensors on this grid");
  }
  result.summary["radial-full-rank"] = report.radial_full_rank();
  result.summary["min-radial-box-rank"] = report.min_radial_box_rank();
  result.summary["vandermonde"] = to_json(report.vandermonde);
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult variation_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"dims", "codim", "maps", "budget"}, config.experiment);
  const auto dims_raw = p.integers("dims", {2, 2}, 1);
  const auto codim = static_cast<std::size_t>(p.integer("codim", 2, 1));
  const auto maps = p.integer("maps", 5, 1);
  const auto budget = static_cast<std::size_t>(p.integer("budget", 10000, 1));
  const auto seed = require_seed(config);
  const std::vector<std::size_t> dims(dims_raw.begin(), dims_raw.end());

  std::vector<std::size_t> checkpoints;
  for (std::size_t c = 1; c < budget; c *= 10) checkpoints.push_back(c);
  checkpoints.push_back(budget);

  ExperimentResult result;
  result.description =
      "partition sums sum|T(x^1,...,x^s)| for random maps; lower_bound = best over the first "
      "`samples` random partitions; atomic = atomic-partition value; oracle = entrywise |t| "
      "applied to the targets";
  result.columns = {"map", "samples", "coordinate", "lower_bound", "atomic", "oracle"};
  for (long long k = 0; k < maps; ++k) {
    auto rng = stream(seed, static_cast<std::uint64_t>(k));
    const auto map = random_map(dims, codim, rng);
    std::vector<LatticeElement> targets;
    for (auto n : dims) targets.push_back(LatticeElement::real(uniform_vector(n, 0.0, 1.0, rng)));
    const auto atomic = variation_modulus(map, targets).value;
    const auto oracle = latticekit::apply(map.entrywise_modulus(), targets);
    if (distance_inf(atomic, oracle) > 1e-10 * oracle.norm_inf()) {
      flag(result, "atomic variation differs from the entrywise oracle for map " + std::to_string(k));
    }
    std::vector<double> best(codim, 0.0);
    std::size_t drawn = 0;
    std::vector<Partition> parts;
    for (auto checkpoint : checkpoints) {
      for (; drawn < checkpoint; ++drawn) {
        parts.clear();
        for (const auto& a : targets) parts.push_back(random_partition(a, rng));
        const auto sum = partition_sum(map, parts);
        for (std::size_t j = 0; j < codim; ++j) best[j] = std::max(best[j], sum.re()[j]);
      }
      for (std::size_t j = 0; j < codim; ++j) {
        result.rows.push_back({k, static_cast<long long>(checkpoint), static_cast<long long>(j),
                               best[j], atomic.re()[j], oracle.re()[j]});
        if (best[j] > atomic.re()[j] * (1.0 + 1e-12) + 1e-300) {
          flag(result, "a random partition exceeded the atomic value for map " + std::to_string(k));
        }
      }
    }
  }
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult s_power_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"n", "s", "maps"}, config.experiment);
  const auto n = static_cast<std::size_t>(p.integer("n", 3, 1));
  const auto s = static_cast<std::size_t>(p.integer("s", 2, 2));
  const auto maps = p.integer("maps", 100, 1);
  const auto seed = require_seed(config);
  const auto power = s_power(n, s);

  ExperimentResult result;
  result.description =
      "factorization through the s-power (coordinatewise product); residual = "
      "|T - L o power|_inf / |T|(|f|) over random samples; witness_size = arguments returned";
  result.columns = {"map", "kind", "factored", "residual", "witness_size"};
  for (long long k = 0; k < maps; ++k) {
    auto rng = stream(seed, static_cast<std::uint64_t>(k));
    // Orthosymmetric s-morphism: output j reads one diagonal atom.
    auto good = MultilinearMap::zero(std::vector<std::size_t>(s, n), n);
    std::vector<double> coeffs(good.coefficients().size(), 0.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> weight(0.0, 2.0);
    for (std::size_t j = 0; j < n; ++j) {
      const std::vector<std::size_t> diag(s, pick(rng));
      coeffs[good.flat_index(j, diag)] = weight(rng);
    }
    good = MultilinearMap::real(std::vector<std::size_t>(s, n), n, coeffs);
    const auto bad = random_map(std::vector<std::size_t>(s, n), n, rng);

    const auto fact = factor_through_power(good, power, 20, seed + static_cast<std::uint64_t>(k));
    result.rows.push_back({k, std::string("orthosymmetric"), true, fact.residual, 0LL});
    if (fact.residual > 1e-10) flag(result, "factorization residual above 1e-10 for map " + std::to_string(k));

    if (n == 1) continue;  // every map on R^1 is orthosymmetric
    try {
      factor_through_power(bad, power, 20, seed + static_cast<std::uint64_t>(k));
      result.rows.push_back({k, std::string("generic"), true, 0.0, 0LL});
      flag(result, "a non-orthosymmetric map factored for map " + std::to_string(k));
    } catch (const FactorizationError& e) {
      result.rows.push_back({k, std::string("generic"), false, std::string(),
                             static_cast<long long>(e.witness().size())});
      if (e.witness().empty()) flag(result, "factorization failed without a witness");
    }
  }
  result.summary["tensor-dim"] = power.tensor_dim;
  result.summary["ideal-dim"] = power.ideal_dim();
  result.summary["quotient-dim"] = power.quotient_dim();
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult lbv_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"dims", "codim", "samples"}, config.experiment);
  const auto dims_raw = p.integers("dims", {2, 2}, 1);
  const auto codim = static_cast<std::size_t>(p.integer("codim", 1, 1));
  const auto samples = static_cast<std::size_t>(p.integer("samples", 100, 1));
  const auto seed = require_seed(config);
  const std::vector<std::size_t> dims(dims_raw.begin(), dims_raw.end());

  const auto cert = check_lbv_isomorphism(dims, codim, samples, seed);
  ExperimentResult result;
  result.description =
      "correspondence T -> linear map on the tensor lattice; flags for linearity, bijectivity, "
      "positivity both ways, and modulus transport; max_residual is relative";
  result.columns = {"samples", "linear", "bijective", "positive_both_ways",
                    "modulus_correspondence", "max_residual"};
  result.rows.push_back({static_cast<long long>(cert.samples), cert.linear, cert.bijective,
                         cert.positive_both_ways, cert.modulus_correspondence, cert.max_residual});
  if (!cert.holds()) flag(result, "the tensor correspondence failed a lattice-isomorphism check");
  result.summary["certificate"] = to_json(cert);
  result.summary["parameters"] = p.resolved();
  return result;
}

ExperimentResult density_experiment(const ExperimentConfig& config) {
  Params p(config.parameters, {"mode", "generators", "x", "y", "max-stage", "cap", "tolerance"},
           config.experiment);
  const auto mode = p.text("mode", "coordinate", {"coordinate", "symbolic"});
  const auto max_stage = static_cast<std::size_t>(p.integer("max-stage", mode == "symbolic" ? 4 : 6, 1));
  StageOptions options;
  options.cap = static_cast<std::size_t>(p.integer("cap", 4096, 1));
  const double tolerance = p.number("tolerance", 1e-8);

  ExperimentResult result;
  result.description =
      "square-mean closure stages; generators = span dimension (coordinate) or distinct "
      "expressions (symbolic); full_rank = generators whose grid samples have full slice rank";
  result.columns = {"stage", "generators", "full_rank"};

  if (mode == "coordinate") {
    const auto gens = p.lists("generators", {{1.0, -1.0, 0.0}, {0.0, 1.0, 2.0}});
    std::vector<LatticeElement> elements;
    for (const auto& g : gens) {
      if (g.size() != gens.front().size()) throw ValidationError("generators must share one length");
      elements.push_back(LatticeElement::real(g));
    }
    auto family = GeneratorFamily::coordinate(elements);
    const auto trace = density_stage_trace(family, max_stage, options);
    for (std::size_t k = 0; k < trace.counts.size(); ++k) {
      result.rows.push_back({static_cast<long long>(k + 1), static_cast<long long>(trace.counts[k]),
                             std::string()});
    }
    result.summary["stabilized-at"] =
        trace.stabilized_at ? Json(*trace.stabilized_at) : Json(nullptr);
    result.summary["cap-reached"] = trace.cap_reached;
  } else {
    const auto x = p.numbers("x", {1.0, 2.0, 4.0});
    const auto y = p.numbers("y", {1.0, 3.0, 5.0});
    const Backend gx = Backend::grid(x);
    const Backend gy = Backend::grid(y);
    const auto grid = product_grid(x, y);
    const auto ones_x = LatticeElement(gx, std::vector<double>(x.size(), 1.0));
    const auto ones_y = LatticeElement(gy, std::vector<double>(y.size(), 1.0));
    const std::vector<LatticeExpr> leaves{
        LatticeExpr::of(PureTensor({LatticeElement(gx, x), ones_y})),
        LatticeExpr::of(PureTensor({ones_x, LatticeElement(gy, y)}))};
    auto family = GeneratorFamily::symbolic(leaves, grid);
    bool capped = false;
    while (true) {
      std::size_t full = 0;
      for (std::size_t i = 0; i < family.size(); ++i) {
        const auto rank = family.generator_rank(i, tolerance);
        full += rank.numerical_rank == std::min(rank.rows, rank.cols);
      }
      result.rows.push_back({static_cast<long long>(family.stage()),
                             static_cast<long long>(family.size()), static_cast<long long>(full)});
      if (family.stage() >= max_stage) break;
      try {
        family = square_mean_stage(family, options);
      } catch (const GeneratorCapExceeded&) {
        capped = true;
        break;
      }
    }
    result.summary["cap-reached"] = capped;
  }
  result.summary["parameters"] = p.resolved();
  return result;
}

using Runner = std::function<ExperimentResult(const ExperimentConfig&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"axioms", axioms_experiment},
      {"sigma-convergence", sigma_experiment},
      {"complex-modulus", complex_modulus_experiment},
      {"de-schipper", de_schipper_experiment},
      {"vandermonde", vandermonde_experiment},
      {"incompleteness", incompleteness_experiment},
      {"variation", variation_experiment},
      {"s-power", s_power_experiment},
      {"lbv-iso", lbv_experiment},
      {"density-trace", density_experiment},
  };
  return table;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return csv_field(v);
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        if constexpr (std::is_same_v<T, double>) return format_number(v);
        if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
      },
      cell);
}

Json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v.empty() ? Json(nullptr) : Json(v);
        } else {
          return Json(v);
        }
      },
      cell);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> keys{"experiment", "parameters", "seed", "output", "format"};
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw ValidationError("unknown config field '" + key + "'");
  }
  ExperimentConfig config;
  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    throw ValidationError("config needs a string field 'experiment'");
  }
  config.experiment = j.at("experiment").get<std::string>();
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_object()) throw ValidationError("'parameters' must be an object");
    config.parameters = j.at("parameters");
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("'seed' must be a non-negative integer");
    config.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ValidationError("'output' must be a string");
    config.output = j.at("output").get<std::string>();
  }
  if (j.contains("format")) {
    if (!j.at("format").is_string()) throw ValidationError("'format' must be a string");
    config.format = j.at("format").get<std::string>();
  }
  return config;
}

void ExperimentConfig::set_parameter(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("parameter '" + assignment + "' must look like name=value");
  }
  const auto name = assignment.substr(0, eq);
  const auto text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  parameters[name] = value;
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, runner] : runners()) out.push_back(id);
    return out;
  }();
  return ids;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto it = runners().find(config.experiment);
  if (it == runners().end()) {
    throw ValidationError("unknown experiment '" + config.experiment + "'");
  }
  if (config.format != "csv" && config.format != "json") {
    throw ValidationError("format must be csv or json, got '" + config.format + "'");
  }
  try {
    auto result = it->second(config);
    result.experiment = config.experiment;
    return result;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    // Library preconditions violated by the supplied parameters.
    throw ValidationError(e.what());
  }
}

std::string render_csv(const ExperimentResult& result) {
  std::string out = "# " + result.experiment + ": " + result.description + "\n";
  for (std::size_t c = 0; c < result.columns.size(); ++c) {
    out += (c ? "," : "") + csv_field(result.columns[c]);
  }
  out += "\n";
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell_text(row[c]);
    out += "\n";
  }
  return out;
}

std::string render_json(const ExperimentResult& result, const ExperimentConfig& config) {
  Json j;
  j["experiment"] = result.experiment;
  j["description"] = result.description;
  j["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  j["columns"] = result.columns;
  j["rows"] = Json::array();
  for (const auto& row : result.rows) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(cell_json(cell));
    j["rows"].push_back(r);
  }
  j["summary"] = result.summary;
  j["violated"] = result.violated;
  if (result.violated) j["violation"] = result.violation;
  return j.dump(2) + "\n";
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  ExperimentResult result;
  try {
    result = run_experiment(config);
  } catch (const ValidationError& e) {
    err << "latticekit: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto text = config.format == "json" ? render_json(result, config) : render_csv(result);
  if (config.output.empty() || config.output == "-") {
    out << text;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
      err << "latticekit: cannot write '" << config.output << "'\n";
      return kExitValidation;
    }
    file << text;
  }
  if (result.violated) {
    err << "latticekit: certified bound violated: " << result.violation << "\n";
    return kExitBoundViolated;
  }
  return kExitOk;
}

}  // namespace latticekit
