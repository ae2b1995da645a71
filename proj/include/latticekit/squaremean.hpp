#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latticekit/core.hpp"
#include "latticekit/tensor.hpp"

namespace latticekit {

/// Square mean sqrt((f^2 + g^2) / 2), coordinatewise. Always positive.
LatticeElement mu24(const LatticeElement& f, const LatticeElement& g);

/// sup over theta of f cos(theta) + g sin(theta); computed as sqrt(2) * mu24(f, g).
LatticeElement boxplus(const LatticeElement& f, const LatticeElement& g);

enum class Trig { cos, sin };

std::string to_string(Trig fn);
Trig trig_from_string(const std::string& name);

struct TrigFactor {
  Trig fn;
  std::size_t angle;  // angle variable, shared between factors with the same id

  bool operator==(const TrigFactor& other) const = default;
};

/// coefficient * prod_j t_j(theta_{angle_j}), theta ranging over [0, pi/2].
class TrigTerm {
 public:
  /// Factor j uses angle variable j, so single-factor terms share angle 0.
  TrigTerm(LatticeElement coefficient, const std::vector<Trig>& fns);
  TrigTerm(LatticeElement coefficient, std::vector<TrigFactor> factors);

  const LatticeElement& coefficient() const noexcept { return coefficient_; }
  const std::vector<TrigFactor>& factors() const noexcept { return factors_; }
  std::size_t order() const noexcept { return factors_.size(); }

 private:
  LatticeElement coefficient_;
  std::vector<TrigFactor> factors_;
};

struct SigmaCertificate {
  int depth = 0;
  LatticeElement approximant;
  /// (pi / 2^m) * sum_k p_k |u_k|
  LatticeElement error_bound;
  double grid_spacing = 0.0;
  std::size_t tuples_evaluated = 0;
};

inline constexpr std::size_t kDefaultGridBudget = 1'000'000;

/// Finite join of sum_k u_k prod_j t_{k,j}(theta) over the nested dyadic grid
/// theta_l = l pi / 2^(m+1), l = 0..2^m, one grid index per angle variable.
/// The true supremum exceeds the approximant by at most error_bound.
SigmaCertificate sigma_m(const std::vector<TrigTerm>& terms, int m,
                         std::size_t budget = kDefaultGridBudget);

/// Closed-form supremum for single-factor terms: per angle variable,
/// sup of A cos + B sin on [0, pi/2] is hypot(A, B) if A, B >= 0, else max(A, B).
LatticeElement trig_sup_closed_form(const std::vector<TrigTerm>& terms);

/// Generator of a symbolic family: a lattice expression over pure tensors, or
/// mu24 of two earlier generators (a null child stands for 0).
class SymbolicGenerator {
 public:
  static std::shared_ptr<const SymbolicGenerator> leaf(LatticeExpr expr);
  static std::shared_ptr<const SymbolicGenerator> square_mean(
      std::shared_ptr<const SymbolicGenerator> a, std::shared_ptr<const SymbolicGenerator> b);

  bool is_leaf() const noexcept { return expr_.has_value(); }
  const std::optional<LatticeExpr>& expr() const noexcept { return expr_; }
  const std::shared_ptr<const SymbolicGenerator>& lhs() const noexcept { return lhs_; }
  const std::shared_ptr<const SymbolicGenerator>& rhs() const noexcept { return rhs_; }

  LatticeElement evaluate(const Backend& grid) const;
  std::string describe() const;

 private:
  std::optional<LatticeExpr> expr_;
  std::shared_ptr<const SymbolicGenerator> lhs_;
  std::shared_ptr<const SymbolicGenerator> rhs_;
};

struct StageOptions {
  std::size_t cap = 4096;
  double dedup_tolerance = 1e-9;
};

/// Stage E_n of the square-mean closure. Coordinate families keep a basis of
/// the spanned subspace; symbolic families keep distinct expressions.
class GeneratorFamily {
 public:
  static GeneratorFamily coordinate(const std::vector<LatticeElement>& generators,
                                    double dedup_tolerance = 1e-9);
  static GeneratorFamily symbolic(const std::vector<LatticeExpr>& leaves, Backend grid);

  std::size_t stage() const noexcept { return stage_; }
  bool is_symbolic() const noexcept { return grid_.has_value(); }
  std::size_t size() const noexcept;

  const std::vector<LatticeElement>& elements() const noexcept { return elements_; }
  const std::vector<std::shared_ptr<const SymbolicGenerator>>& symbols() const noexcept {
    return symbols_;
  }
  const std::optional<Backend>& grid() const noexcept { return grid_; }

  /// Samples of generator i (coordinate generators are returned as is).
  LatticeElement sample(std::size_t i) const;
  /// Slice rank of symbolic generator i on a two-axis grid.
  RankCertificate generator_rank(std::size_t i, double tolerance = 1e-8) const;

 private:
  friend struct StageBuilder;
  friend GeneratorFamily square_mean_stage(const GeneratorFamily&, const StageOptions&);
  GeneratorFamily() = default;

  std::size_t stage_ = 1;
  std::vector<LatticeElement> elements_;
  std::vector<std::shared_ptr<const SymbolicGenerator>> symbols_;
  std::vector<std::pair<const SymbolicGenerator*, const SymbolicGenerator*>> symbol_keys_;
  std::optional<Backend> grid_;
  double dedup_tolerance_ = 1e-9;
};

/// E_{n+1}: E_n extended by mu24(f, g) for all pairs of generators and 0,
/// duplicates removed (span membership, or expression identity).
GeneratorFamily square_mean_stage(const GeneratorFamily& family, const StageOptions& options = {});

struct StageTrace {
  std::vector<std::size_t> counts;  // generator count per stage, from stage 1
  std::optional<std::size_t> stabilized_at;
  bool cap_reached = false;
};

StageTrace density_stage_trace(const GeneratorFamily& family, std::size_t max_stage,
                               const StageOptions& options = {});

}  // namespace latticekit
