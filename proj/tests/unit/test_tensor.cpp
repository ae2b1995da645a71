#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>
#include <random>

#include "latticekit/tensor.hpp"
#include "oracles.hpp"

using namespace latticekit;

namespace {

LatticeElement on_axis(const std::vector<double>& axis, std::vector<double> values) {
  return {Backend::grid(axis), std::move(values)};
}

LatticeElement ones(const std::vector<double>& axis) {
  return on_axis(axis, std::vector<double>(axis.size(), 1.0));
}

LatticeExpr x_tensor_one(const std::vector<double>& xs, const std::vector<double>& ys) {
  return LatticeExpr::of(PureTensor({on_axis(xs, xs), ones(ys)}));
}

LatticeExpr one_tensor_y(const std::vector<double>& xs, const std::vector<double>& ys) {
  return LatticeExpr::of(PureTensor({ones(xs), on_axis(ys, ys)}));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

TEST(Tensor, PureTensorSamples) {
  const std::vector<double> xs{1, 2};
  const std::vector<double> ys{1, 3};
  const auto expr = LatticeExpr::of(PureTensor({on_axis(xs, xs), on_axis(ys, ys)}));
  const auto m = as_matrix(eval_expr(expr, product_grid(xs, ys)));
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(0, 1), 3);
  EXPECT_EQ(m(1, 0), 2);
  EXPECT_EQ(m(1, 1), 6);
}

TEST(Tensor, JoinAndMeetEvaluation) {
  const std::vector<double> xs{0.2, 2};
  const std::vector<double> ys{0.7, 3};
  const auto grid = product_grid(xs, ys);
  const auto j = join(x_tensor_one(xs, ys), one_tensor_y(xs, ys));
  EXPECT_DOUBLE_EQ(as_matrix(eval_expr(j, grid))(0, 0), 0.7);
  const auto unit = LatticeExpr::of(PureTensor({ones(xs), ones(ys)}));
  EXPECT_DOUBLE_EQ(as_matrix(eval_expr(meet(j, unit), grid))(1, 1), 1.0);
}

TEST(Tensor, GridMismatchIsRejected) {
  const std::vector<double> xs{1, 2};
  const std::vector<double> ys{1, 3};
  const auto expr = x_tensor_one(xs, ys);
  EXPECT_THROW((void)eval_expr(expr, product_grid({1, 2}, {1, 4})), InvalidArgument);
  EXPECT_THROW(PureTensor({on_axis(xs, xs)}), InvalidArgument);
}

TEST(Tensor, DistributivitySpotCheck) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto xs = linspace(0.1, 1, 5);
  const auto ys = linspace(0.3, 2, 6);
  const auto grid = product_grid(xs, ys);
  auto random_tensor = [&] {
    std::vector<double> f(xs.size()), g(ys.size());
    for (auto& v : f) v = u(rng);
    for (auto& v : g) v = u(rng);
    return LatticeExpr::of(PureTensor({on_axis(xs, f), on_axis(ys, g)}));
  };
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_tensor(), b = random_tensor(), c = random_tensor();
    const auto lhs = eval_expr(meet(join(a, b), c), grid);
    const auto rhs = eval_expr(join(meet(a, c), meet(b, c)), grid);
    EXPECT_LE(distance_inf(lhs, rhs), 1e-15);
  }
}

TEST(Tensor, EvaluationIsMonotone) {
  const auto xs = linspace(0.1, 1, 4);
  const auto ys = linspace(0.1, 1, 4);
  const auto grid = product_grid(xs, ys);
  const auto small = LatticeExpr::of(PureTensor({on_axis(xs, xs), ones(ys)}), 1.0);
  const auto large = LatticeExpr::of(PureTensor({on_axis(xs, xs), ones(ys)}), 2.0);
  const auto other = one_tensor_y(xs, ys);
  EXPECT_TRUE(less_equal(eval_expr(meet(join(small, other), other), grid),
                         eval_expr(meet(join(large, other), other), grid)));
}

TEST(Tensor, RankOneOuterProduct) {
  const auto xs = linspace(1, 3, 7);
  const auto ys = linspace(-1, 2, 9);
  const auto expr = LatticeExpr::of(PureTensor({on_axis(xs, xs), on_axis(ys, ys)}));
  const auto cert = slice_rank(as_matrix(eval_expr(expr, product_grid(xs, ys))));
  EXPECT_EQ(cert.numerical_rank, 1u);
  EXPECT_EQ(cert.rows, 7u);
  EXPECT_EQ(cert.cols, 9u);
  EXPECT_EQ(cert.tolerance, 1e-8);
}

TEST(Tensor, RankThreeSum) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  for (int r = 0; r < 3; ++r) {
    Eigen::VectorXd f(8), g(8);
    for (int i = 0; i < 8; ++i) {
      f(i) = n(rng);
      g(i) = n(rng);
    }
    m += f * g.transpose();
  }
  EXPECT_EQ(slice_rank(m).numerical_rank, 3u);
  const auto sv = slice_rank(m).singular_values;
  EXPECT_TRUE(std::is_sorted(sv.rbegin(), sv.rend()));
}

TEST(Tensor, RadialFullRankOnGeometricGrids) {
  for (std::size_t n = 2; n <= 12; ++n) {
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = std::pow(3.0, static_cast<double>(i));
      ys[i] = 1.5 * std::pow(3.0, static_cast<double>(i));
    }
    EXPECT_EQ(slice_rank(radial_samples(xs, ys)).numerical_rank, n) << "n = " << n;
  }
}

TEST(Tensor, RankToleranceValidation) {
  EXPECT_THROW((void)slice_rank(Eigen::MatrixXd::Ones(2, 2), 0.0), InvalidArgument);
  EXPECT_THROW((void)slice_rank(Eigen::MatrixXd(0, 0)), InvalidArgument);
}

TEST(Tensor, VandermondeTwoByTwo) {
  const auto cert = vandermonde_certificate(1.0, {1, 2});
  EXPECT_NEAR(cert.det_direct, -0.3, 1e-15);
  EXPECT_NEAR(cert.det_product_formula, -0.3, 1e-15);
  EXPECT_NEAR(static_cast<double>(oracle::vandermonde_det(1.0, {1, 2})), -0.3, 1e-15);
  EXPECT_TRUE(cert.nonzero);
}

TEST(Tensor, VandermondeSingleNode) {
  const auto cert = vandermonde_certificate(2.5, {0.7});
  EXPECT_EQ(cert.det_direct, 1.0);
  EXPECT_EQ(cert.det_product_formula, 1.0);
  EXPECT_TRUE(cert.nonzero);
}

TEST(Tensor, VandermondeDegenerate) {
  try {
    (void)vandermonde_certificate(1.0, {1, 1});
    FAIL() << "expected DegenerateInput";
  } catch (const DegenerateInput& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate alphas"), std::string::npos);
  }
  EXPECT_THROW((void)vandermonde_certificate(1.0, {-1, 2}), InvalidArgument);
}

TEST(Tensor, VandermondeAgreesWithPermutationExpansion) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.5, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    std::vector<double> alphas(n);
    for (auto& a : alphas) a = u(rng);
    const double x = u(rng);
    const auto cert = vandermonde_certificate(x, alphas);
    const double oracle_det = static_cast<double>(oracle::vandermonde_det(x, alphas));
    EXPECT_NEAR(cert.det_direct, oracle_det, 1e-6 * std::abs(oracle_det));
    EXPECT_LE(cert.relative_gap(), 1e-9);
  }
}

TEST(Tensor, LocalPieceOfJoin) {
  const auto xs = linspace(0, 1, 11);
  const auto ys = linspace(0, 1, 11);
  const auto grid = product_grid(xs, ys);
  const auto expr = join(x_tensor_one(xs, ys), one_tensor_y(xs, ys));
  const auto piece = local_pure_piece(expr, grid);
  EXPECT_EQ(piece.meet_index, 0u);
  EXPECT_EQ(piece.join_index, 0u);
  EXPECT_FALSE(piece.tie);
  EXPECT_GT(piece.margin, 0.0);
  EXPECT_EQ(piece.box.area(), 30u);
  for (std::size_t r = piece.box.row_begin; r < piece.box.row_end; ++r) {
    for (std::size_t c = piece.box.col_begin; c < piece.box.col_end; ++c) EXPECT_GT(xs[r], ys[c]);
  }
  // The expression restricted to the box has rank at most one (one pure tensor active).
  const Eigen::MatrixXd m = as_matrix(eval_expr(expr, grid));
  const Eigen::MatrixXd block = m.block(piece.box.row_begin, piece.box.col_begin, piece.box.rows(), piece.box.cols());
  EXPECT_LE(slice_rank(block).numerical_rank, 1u);
}

TEST(Tensor, LocalPieceSingleTerm) {
  const auto xs = linspace(0, 1, 4);
  const auto ys = linspace(0, 1, 5);
  const auto piece = local_pure_piece(x_tensor_one(xs, ys), product_grid(xs, ys));
  EXPECT_EQ(piece.box, (SubBox{0, 4, 0, 5}));
  EXPECT_EQ(piece.margin, DBL_MAX);
  EXPECT_FALSE(piece.tie);
}

TEST(Tensor, LocalPieceTie) {
  const auto xs = linspace(0, 1, 4);
  const auto ys = linspace(0, 1, 4);
  const auto piece = local_pure_piece(join(x_tensor_one(xs, ys), x_tensor_one(xs, ys)), product_grid(xs, ys));
  EXPECT_TRUE(piece.tie);
  EXPECT_EQ(piece.margin, 0.0);
}

TEST(Tensor, IncompletenessTwoByTwo) {
  const std::vector<double> xs{1, 2};
  const std::vector<double> ys{1, 2};
  const auto report = incompleteness_witness(xs, ys, 1, 2);
  EXPECT_EQ(report.radial.numerical_rank, 2u);
  EXPECT_TRUE(report.vandermonde.nonzero);
  EXPECT_TRUE(vandermonde_certificate(1, {1, 2}).nonzero);
  EXPECT_TRUE(report.radial_full_rank());
  EXPECT_TRUE(report.comparator_within_bound());
}

TEST(Tensor, IncompletenessSpreadGrid) {
  const std::vector<double> xs{1, 1.76, 2.95, 3.96, 5.36, 6.91, 8.87, 12.61, 22.86, 37};
  const std::vector<double> ys{1, 1.78, 2.98, 4.01, 5.39, 6.84, 8.79, 12.39, 22.86, 36.64};
  const auto report = incompleteness_witness(xs, ys, 3, 5, 1e-8, 4);
  EXPECT_EQ(report.radial.numerical_rank, 10u);
  EXPECT_EQ(report.radial_boxes.size(), 36u);
  EXPECT_EQ(report.min_radial_box_rank(), 5u);
  EXPECT_LE(report.max_comparator_box_rank(), 3u);
  EXPECT_LE(report.comparator.numerical_rank, 3u);
}

TEST(Tensor, RankOneComparatorOnEveryBox) {
  const auto xs = linspace(1, 2, 6);
  const auto ys = linspace(1, 3, 6);
  const auto expr = LatticeExpr::of(PureTensor({on_axis(xs, xs), on_axis(ys, ys)}));
  const Eigen::MatrixXd m = as_matrix(eval_expr(expr, product_grid(xs, ys)));
  for (const auto& box : contiguous_boxes(6, 6, 3)) {
    EXPECT_EQ(slice_rank(m.block(box.row_begin, box.col_begin, 3, 3)).numerical_rank, 1u);
  }
  EXPECT_EQ(contiguous_boxes(6, 6, 3).size(), 16u);
}

TEST(Tensor, PureTensorBelow) {
  const auto xs = linspace(0, 1, 5);
  const auto ys = linspace(0, 1, 5);
  const auto grid = product_grid(xs, ys);
  const auto w = eval_expr(join(x_tensor_one(xs, ys), one_tensor_y(xs, ys)), grid) -
                 eval_expr(LatticeExpr::of(PureTensor({ones(xs), ones(ys)}), 0.5), grid);
  const auto below = pure_tensor_below(w);
  ASSERT_TRUE(below.has_value());
  bool somewhere_positive = false;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const std::size_t idx[2] = {i, j};
      const double v = below->value_at(idx);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, std::abs(w[i * 5 + j].real()) + 1e-15);
      somewhere_positive = somewhere_positive || v > 0.0;
    }
  }
  EXPECT_TRUE(somewhere_positive);
  EXPECT_FALSE(pure_tensor_below(LatticeElement::zero(grid)).has_value());
}
