#include "latticekit/squaremean.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace latticekit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_real_pair(const LatticeElement& f, const LatticeElement& g) {
  require_same_carrier(f, g);
  if (f.is_complex() || g.is_complex()) throw OrderUndefined();
}

// sup of a cos + b sin over [0, pi/2].
double quarter_sup(double a, double b) {
  if (a >= 0.0 && b >= 0.0) return std::hypot(a, b);
  return std::max(a, b);
}

// (points)^(exponent) or nullopt on overflow past limit.
std::optional<std::size_t> checked_power(std::size_t base, std::size_t exponent,
                                         std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t e = 0; e < exponent; ++e) {
    if (out > limit / base) return std::nullopt;
    out *= base;
  }
  return out;
}

struct AngleTables {
  std::vector<double> cos;
  std::vector<double> sin;

  double value(Trig fn, std::size_t l) const { return fn == Trig::cos ? cos[l] : sin[l]; }
};

AngleTables angle_tables(int m) {
  const std::size_t points = (std::size_t{1} << m) + 1;
  const double step = kPi / std::ldexp(1.0, m + 1);
  AngleTables t;
  t.cos.resize(points);
  t.sin.resize(points);
  for (std::size_t l = 0; l < points; ++l) {
    const double theta = static_cast<double>(l) * step;
    t.cos[l] = std::cos(theta);
    t.sin[l] = std::sin(theta);
  }
  // Exact endpoints, so theta = 0 and pi/2 attain cos = 1 and sin = 1.
  t.cos.front() = 1.0;
  t.sin.front() = 0.0;
  t.cos.back() = 0.0;
  t.sin.back() = 1.0;
  return t;
}

// max over grid l of b cos(theta_l) + c sin(theta_l).
double grid_max_affine(double b, double c, const AngleTables& t, double step) {
  const std::size_t last = t.cos.size() - 1;
  auto at = [&](std::size_t l) { return b * t.cos[l] + c * t.sin[l]; };
  double best = std::max(at(0), at(last));
  if (b == 0.0 && c == 0.0) return best;
  const double phase = std::atan2(c, b);
  if (phase > 0.0 && phase < kPi / 2) {
    const auto l0 = static_cast<std::size_t>(std::floor(phase / step));
    const std::size_t lo = l0 > 0 ? l0 - 1 : 0;
    const std::size_t hi = std::min(last, l0 + 2);
    for (std::size_t l = lo; l <= hi; ++l) best = std::max(best, at(l));
  }
  return best;
}

}  // namespace

LatticeElement mu24(const LatticeElement& f, const LatticeElement& g) {
  require_real_pair(f, g);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::hypot(f.re()[i], g.re()[i]) / std::numbers::sqrt2;
  }
  return {f.backend(), std::move(out)};
}

LatticeElement boxplus(const LatticeElement& f, const LatticeElement& g) {
  return std::numbers::sqrt2 * mu24(f, g);
}

std::string to_string(Trig fn) { return fn == Trig::cos ? "cos" : "sin"; }

Trig trig_from_string(const std::string& name) {
  if (name == "cos") return Trig::cos;
  if (name == "sin") return Trig::sin;
  throw InvalidArgument("unknown trigonometric factor '" + name + "'");
}

// TrigTerm -------------------------------------------------------------------

TrigTerm::TrigTerm(LatticeElement coefficient, const std::vector<Trig>& fns)
    : coefficient_(std::move(coefficient)) {
  for (std::size_t j = 0; j < fns.size(); ++j) factors_.push_back({fns[j], j});
  if (factors_.empty()) throw InvalidArgument("trig term needs a non-empty factor list");
  if (coefficient_.is_complex()) throw OrderUndefined();
}

TrigTerm::TrigTerm(LatticeElement coefficient, std::vector<TrigFactor> factors)
    : coefficient_(std::move(coefficient)), factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidArgument("trig term needs a non-empty factor list");
  if (coefficient_.is_complex()) throw OrderUndefined();
}

// sigma_m --------------------------------------------------------------------

SigmaCertificate sigma_m(const std::vector<TrigTerm>& terms, int m, std::size_t budget) {
  if (m < 1) throw InvalidArgument("depth m must be >= 1");
  if (m > 40) throw InvalidArgument("depth m too large");
  if (terms.empty()) throw InvalidArgument("sigma_m needs at least one term");
  const Backend& backend = terms.front().coefficient().backend();
  for (const auto& term : terms) {
    if (!term.coefficient().backend().same_carrier(backend)) {
      throw BackendMismatch("mismatched backends");
    }
  }

  // Angle variables in use, renumbered 0..A-1.
  std::map<std::size_t, std::size_t> angle_slot;
  for (const auto& term : terms) {
    for (const auto& factor : term.factors()) angle_slot.emplace(factor.angle, 0);
  }
  std::size_t next = 0;
  for (auto& [id, slot] : angle_slot) slot = next++;
  const std::size_t angles = angle_slot.size();

  // The last angle is maximised in closed form when every term is affine in
  // (cos, sin) of it, i.e. uses it at most once.
  const std::size_t last = angles - 1;
  bool eliminate = true;
  for (const auto& term : terms) {
    std::size_t uses = 0;
    for (const auto& factor : term.factors()) uses += angle_slot[factor.angle] == last;
    if (uses > 1) eliminate = false;
  }

  const std::size_t points = (std::size_t{1} << m) + 1;
  const std::size_t enumerated = eliminate ? angles - 1 : angles;
  const auto tuples = checked_power(points, enumerated, budget);
  if (!tuples) {
    std::size_t required = std::numeric_limits<std::size_t>::max();
    if (auto exact = checked_power(points, enumerated, std::numeric_limits<std::size_t>::max())) {
      required = *exact;
    }
    throw BudgetExceeded(required, budget);
  }

  const AngleTables table = angle_tables(m);
  const double step = kPi / std::ldexp(1.0, m + 1);
  const std::size_t n = backend.dimension();

  enum class Role { constant, cos_last, sin_last };
  std::vector<Role> role(terms.size(), Role::constant);
  if (eliminate) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      for (const auto& factor : terms[k].factors()) {
        if (angle_slot[factor.angle] == last) {
          role[k] = factor.fn == Trig::cos ? Role::cos_last : Role::sin_last;
        }
      }
    }
  }

  std::vector<double> best(n, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> index(enumerated, 0);
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t t = 0; t < *tuples; ++t) {
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      double weight = 1.0;
      for (const auto& factor : terms[k].factors()) {
        const std::size_t slot = angle_slot[factor.angle];
        if (eliminate && slot == last) continue;
        weight *= table.value(factor.fn, index[slot]);
      }
      auto& target = role[k] == Role::constant ? a : (role[k] == Role::cos_last ? b : c);
      const auto u = terms[k].coefficient().re();
      for (std::size_t i = 0; i < n; ++i) target[i] += weight * u[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double value = eliminate ? a[i] + grid_max_affine(b[i], c[i], table, step) : a[i];
      best[i] = std::max(best[i], value);
    }
    // Mixed-radix increment over the enumerated angles.
    for (std::size_t s = enumerated; s-- > 0;) {
      if (++index[s] < points) break;
      index[s] = 0;
    }
  }

  std::vector<double> bound(n, 0.0);
  for (const auto& term : terms) {
    const auto u = term.coefficient().re();
    for (std::size_t i = 0; i < n; ++i) {
      bound[i] += static_cast<double>(term.order()) * std::abs(u[i]);
    }
  }
  const double scale = kPi / std::ldexp(1.0, m);
  for (double& v : bound) v *= scale;

  const Backend real_backend = backend.with_field(Field::real);
  return SigmaCertificate{m, LatticeElement(real_backend, std::move(best)),
                          LatticeElement(real_backend, std::move(bound)), step, *tuples};
}

LatticeElement trig_sup_closed_form(const std::vector<TrigTerm>& terms) {
  if (terms.empty()) throw InvalidArgument("closed form needs at least one term");
  const Backend backend = terms.front().coefficient().backend();
  const std::size_t n = backend.dimension();
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> per_angle;
  for (const auto& term : terms) {
    if (term.order() != 1) {
      throw InvalidArgument("closed form needs single-factor terms");
    }
    require_same_carrier(term.coefficient(), terms.front().coefficient());
    auto& [cos_part, sin_part] = per_angle[term.factors().front().angle];
    cos_part.resize(n, 0.0);
    sin_part.resize(n, 0.0);
    auto& target = term.factors().front().fn == Trig::cos ? cos_part : sin_part;
    for (std::size_t i = 0; i < n; ++i) target[i] += term.coefficient().re()[i];
  }
  std::vector<double> out(n, 0.0);
  for (const auto& [angle, parts] : per_angle) {
    for (std::size_t i = 0; i < n; ++i) out[i] += quarter_sup(parts.first[i], parts.second[i]);
  }
  return {backend.with_field(Field::real), std::move(out)};
}

// Symbolic generators ----------------------------------------------------------

std::shared_ptr<const SymbolicGenerator> SymbolicGenerator::leaf(LatticeExpr expr) {
  auto node = std::shared_ptr<SymbolicGenerator>(new SymbolicGenerator());
  node->expr_ = std::move(expr);
  return node;
}

std::shared_ptr<const SymbolicGenerator> SymbolicGenerator::square_mean(
    std::shared_ptr<const SymbolicGenerator> a, std::shared_ptr<const SymbolicGenerator> b) {
  if (!a && !b) throw InvalidArgument("square mean of two zero generators");
  auto node = std::shared_ptr<SymbolicGenerator>(new SymbolicGenerator());
  node->lhs_ = std::move(a);
  node->rhs_ = std::move(b);
  return node;
}

LatticeElement SymbolicGenerator::evaluate(const Backend& grid) const {
  if (expr_) return eval_expr(*expr_, grid);
  const auto zero = LatticeElement::zero(grid.with_field(Field::real));
  const auto a = lhs_ ? lhs_->evaluate(grid) : zero;
  const auto b = rhs_ ? rhs_->evaluate(grid) : zero;
  return mu24(a, b);
}

std::string SymbolicGenerator::describe() const {
  if (expr_) {
    std::size_t tensors = 0;
    for (const auto& joins : expr_->meets()) {
      for (const auto& combination : joins) tensors += combination.size();
    }
    return "expr[" + std::to_string(expr_->meets().size()) + " meets, " +
           std::to_string(tensors) + " tensors]";
  }
  return "mu24(" + (lhs_ ? lhs_->describe() : std::string("0")) + ", " +
         (rhs_ ? rhs_->describe() : std::string("0")) + ")";
}

// GeneratorFamily ---------------------------------------------------------------

struct StageBuilder {
  // Adds v unless it lies in the span of the basis (residual after projection
  // at most tol * max(1, |v|_inf)). Returns whether it was added.
  static bool add_if_independent(GeneratorFamily& family, std::vector<Eigen::VectorXd>& basis,
                                 const LatticeElement& v) {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.re().data(),
                                                          static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd r = x;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) r -= q.dot(r) * q;
    }
    const double residual = r.lpNorm<Eigen::Infinity>();
    if (residual <= family.dedup_tolerance_ * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
      return false;
    }
    basis.push_back(r / r.norm());
    family.elements_.push_back(v);
    return true;
  }

  static std::vector<Eigen::VectorXd> orthonormal_basis(const GeneratorFamily& family) {
    GeneratorFamily scratch;
    scratch.dedup_tolerance_ = family.dedup_tolerance_;
    std::vector<Eigen::VectorXd> basis;
    for (const auto& e : family.elements_) add_if_independent(scratch, basis, e);
    return basis;
  }
};

GeneratorFamily GeneratorFamily::coordinate(const std::vector<LatticeElement>& generators,
                                            double dedup_tolerance) {
  if (generators.empty()) throw InvalidArgument("generator family must be non-empty");
  GeneratorFamily family;
  family.dedup_tolerance_ = dedup_tolerance;
  std::vector<Eigen::VectorXd> basis;
  for (const auto& g : generators) {
    require_same_carrier(g, generators.front());
    if (g.is_complex()) throw OrderUndefined();
    StageBuilder::add_if_independent(family, basis, g);
  }
  if (family.elements_.empty()) throw InvalidArgument("generator family spans only {0}");
  return family;
}

GeneratorFamily GeneratorFamily::symbolic(const std::vector<LatticeExpr>& leaves, Backend grid) {
  if (leaves.empty()) throw InvalidArgument("generator family must be non-empty");
  GeneratorFamily family;
  family.grid_ = grid;
  for (const auto& expr : leaves) {
    eval_expr(expr, grid);  // validates the grid
    const bool seen = std::any_of(family.symbols_.begin(), family.symbols_.end(),
                                  [&](const auto& s) { return s->is_leaf() && *s->expr() == expr; });
    if (seen) continue;
    family.symbols_.push_back(SymbolicGenerator::leaf(expr));
    family.symbol_keys_.push_back({nullptr, nullptr});
  }
  return family;
}

std::size_t GeneratorFamily::size() const noexcept {
  return is_symbolic() ? symbols_.size() : elements_.size();
}

LatticeElement GeneratorFamily::sample(std::size_t i) const {
  if (is_symbolic()) return symbols_.at(i)->evaluate(*grid_);
  return elements_.at(i);
}

RankCertificate GeneratorFamily::generator_rank(std::size_t i, double tolerance) const {
  if (!is_symbolic()) throw InvalidArgument("generator_rank needs a symbolic family");
  return slice_rank(as_matrix(sample(i)), tolerance);
}

GeneratorFamily square_mean_stage(const GeneratorFamily& family, const StageOptions& options) {
  GeneratorFamily out = family;
  out.stage_ = family.stage() + 1;
  out.dedup_tolerance_ = options.dedup_tolerance;

  if (!family.is_symbolic()) {
    auto basis = StageBuilder::orthonormal_basis(family);
    const auto& gens = family.elements();
    const auto zero = LatticeElement::zero(gens.front().backend());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      StageBuilder::add_if_independent(out, basis, mu24(gens[i], zero));
      for (std::size_t j = i; j < gens.size(); ++j) {
        StageBuilder::add_if_independent(out, basis, mu24(gens[i], gens[j]));
      }
    }
    return out;
  }

  // Symbolic: identity of mu24 nodes is the unordered pair of operands.
  std::set<std::pair<const SymbolicGenerator*, const SymbolicGenerator*>> keys(
      family.symbol_keys_.begin(), family.symbol_keys_.end());
  const auto gens = family.symbols();
  auto add = [&](std::shared_ptr<const SymbolicGenerator> a,
                 std::shared_ptr<const SymbolicGenerator> b) {
    const SymbolicGenerator* lo = std::min(a.get(), b.get(), std::less<>{});
    const SymbolicGenerator* hi = std::max(a.get(), b.get(), std::less<>{});
    const std::pair<const SymbolicGenerator*, const SymbolicGenerator*> key{lo, hi};
    if (!keys.insert(key).second) return;
    if (out.symbols_.size() + 1 > options.cap) {
      throw GeneratorCapExceeded(out.symbols_.size() + 1, options.cap);
    }
    out.symbols_.push_back(SymbolicGenerator::square_mean(std::move(a), std::move(b)));
    out.symbol_keys_.push_back(key);
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    add(gens[i], nullptr);
    for (std::size_t j = i; j < gens.size(); ++j) add(gens[i], gens[j]);
  }
  return out;
}

StageTrace density_stage_trace(const GeneratorFamily& family, std::size_t max_stage,
                               const StageOptions& options) {
  if (max_stage < 1) throw InvalidArgument("max-stage must be >= 1");
  StageTrace trace;
  GeneratorFamily current = family;
  trace.counts.push_back(current.size());
  while (current.stage() < max_stage) {
    try {
      current = square_mean_stage(current, options);
    } catch (const GeneratorCapExceeded&) {
      trace.cap_reached = true;
      break;
    }
    trace.counts.push_back(current.size());
    const std::size_t k = trace.counts.size();
    if (trace.counts[k - 1] == trace.counts[k - 2]) {
      trace.stabilized_at = k - 1;
      break;
    }
  }
  return trace;
}

}  // namespace latticekit
