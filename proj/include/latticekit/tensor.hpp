#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latticekit/core.hpp"

namespace latticekit {

/// f_1 (x) ... (x) f_s with each factor sampled on a one-axis grid; its value
/// at a grid tuple is the product of the factor values.
class PureTensor {
 public:
  explicit PureTensor(std::vector<LatticeElement> factors);

  std::size_t arity() const noexcept { return factors_.size(); }
  const std::vector<LatticeElement>& factors() const noexcept { return factors_; }
  double value_at(std::span<const std::size_t> index) const;

  bool operator==(const PureTensor& other) const = default;

 private:
  std::vector<LatticeElement> factors_;
};

struct WeightedTensor {
  double coefficient;
  PureTensor tensor;

  bool operator==(const WeightedTensor& other) const = default;
};

/// Finite linear combination of pure tensors: a member of the algebraic
/// tensor product.
using LinearCombination = std::vector<WeightedTensor>;

double evaluate(const LinearCombination& combination, std::span<const std::size_t> index);

/// Meet of joins of linear combinations:  /\_j \/_k f_{j,k}.
class LatticeExpr {
 public:
  using Join = std::vector<LinearCombination>;

  explicit LatticeExpr(std::vector<Join> meets);
  static LatticeExpr of(PureTensor tensor, double coefficient = 1.0);
  static LatticeExpr of(LinearCombination combination);

  const std::vector<Join>& meets() const noexcept { return meets_; }
  const LinearCombination& combination(std::size_t meet, std::size_t join) const {
    return meets_.at(meet).at(join);
  }
  std::size_t arity() const;

  double value_at(std::span<const std::size_t> index) const;

  bool operator==(const LatticeExpr& other) const = default;

 private:
  std::vector<Join> meets_;
};

/// a \/ b kept in meet-join normal form by distributing over the meets.
LatticeExpr join(const LatticeExpr& a, const LatticeExpr& b);
/// a /\ b: concatenation of the meets.
LatticeExpr meet(const LatticeExpr& a, const LatticeExpr& b);

/// Samples on a product grid backend whose axes match every factor grid.
LatticeElement eval_expr(const LatticeExpr& expr, const Backend& grid);

/// Product grid backend built from two axes.
Backend product_grid(std::vector<double> x_axis, std::vector<double> y_axis);

/// Reshapes a two-axis grid element into a matrix (rows follow axis 0).
Eigen::MatrixXd as_matrix(const LatticeElement& samples);

/// Samples S(x, y) = sqrt(x^2 + y^2) on x_axis x y_axis.
Eigen::MatrixXd radial_samples(std::span<const double> x_axis, std::span<const double> y_axis);

struct RankCertificate {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> singular_values;  // descending
  std::size_t numerical_rank = 0;
  double tolerance = 0.0;
};

/// Numerical rank: singular values above tolerance * sigma_max.
RankCertificate slice_rank(const Eigen::MatrixXd& samples, double tolerance = 1e-8);

struct VandermondeCertificate {
  double x = 0.0;
  std::vector<double> alphas;
  double det_direct = 0.0;
  double det_product_formula = 0.0;
  bool nonzero = false;

  double relative_gap() const;
};

/// det B(x), B_ij = 1 / (x^2 + alpha_j^2)^(i-1), both by LU on the matrix
/// (50-digit arithmetic) and by the closed-form product
///   prod_{j<k} (alpha_j^2 - alpha_k^2) / ((x^2 + alpha_j^2)(x^2 + alpha_k^2)).
VandermondeCertificate vandermonde_certificate(double x, std::vector<double> alphas);

/// Half-open index rectangle [row_begin, row_end) x [col_begin, col_end).
struct SubBox {
  std::size_t row_begin = 0;
  std::size_t row_end = 0;
  std::size_t col_begin = 0;
  std::size_t col_end = 0;

  std::size_t rows() const { return row_end - row_begin; }
  std::size_t cols() const { return col_end - col_begin; }
  std::size_t area() const { return rows() * cols(); }
  bool operator==(const SubBox& other) const = default;
};

struct LocalPiece {
  SubBox box;
  std::size_t meet_index = 0;
  std::size_t join_index = 0;
  /// Smallest activation margin over the box; the largest double when the
  /// expression has a single combination.
  double margin = 0.0;
  bool tie = false;
};

/// Largest grid box on which one combination f_{j,k} is strictly the active
/// term of the meet-join everywhere. Two-axis grids only.
LocalPiece local_pure_piece(const LatticeExpr& expr, const Backend& grid);

struct SubBoxRank {
  SubBox box;
  std::size_t rank = 0;
};

struct IncompletenessReport {
  std::size_t generator_bound = 0;
  std::size_t box_size = 0;
  RankCertificate radial;
  std::vector<SubBoxRank> radial_boxes;
  RankCertificate comparator;
  std::vector<SubBoxRank> comparator_boxes;
  VandermondeCertificate vandermonde;

  std::size_t min_radial_box_rank() const;
  std::size_t max_comparator_box_rank() const;
  /// Full rank on the grid and on every box, and above the generator bound.
  bool radial_full_rank() const;
  bool comparator_within_bound() const;
};

/// Rank witness that sqrt(x^2+y^2) is outside the span of any r pure tensors:
/// slice rank of the radial samples on the grid and on every contiguous
/// box_size x box_size sub-box, compared against a seeded random combination
/// of r pure tensors on the same grid.
IncompletenessReport incompleteness_witness(std::span<const double> x_axis,
                                            std::span<const double> y_axis,
                                            std::size_t generator_bound,
                                            std::size_t box_size = 5,
                                            double tolerance = 1e-8,
                                            std::uint64_t seed = 0);

/// All contiguous size x size boxes of a rows x cols grid.
std::vector<SubBox> contiguous_boxes(std::size_t rows, std::size_t cols, std::size_t size);

/// 0 < f (x) g <= |w| on a two-axis grid, or nothing when w = 0.
std::optional<PureTensor> pure_tensor_below(const LatticeElement& w);

}  // namespace latticekit
