#include <gtest/gtest.h>

#include <random>

#include "latticekit/opvar.hpp"
#include "oracles.hpp"

using namespace latticekit;

namespace {

oracle::Map to_oracle(const MultilinearMap& m) {
  return {m.domain_dims(), m.codomain_dim(), {m.coefficients().begin(), m.coefficients().end()}};
}

std::vector<double> values(const LatticeElement& e) { return {e.re().begin(), e.re().end()}; }

}  // namespace

TEST(Opvar, AtomicPartitions) {
  const auto p = atomic_partition(LatticeElement::real({2, 3}));
  ASSERT_EQ(p.pieces().size(), 2u);
  EXPECT_EQ(p.pieces()[0], LatticeElement::real({2, 0}));
  EXPECT_EQ(p.pieces()[1], LatticeElement::real({0, 3}));
  EXPECT_TRUE(atomic_partition(LatticeElement::real({0, 0})).pieces().empty());
  const auto q = atomic_partition(LatticeElement::real({1, 0, 4}));
  ASSERT_EQ(q.pieces().size(), 2u);
  EXPECT_EQ(q.pieces()[0], LatticeElement::real({1, 0, 0}));
  EXPECT_EQ(q.pieces()[1], LatticeElement::real({0, 0, 4}));
}

TEST(Opvar, PartitionValidation) {
  const auto a = LatticeElement::real({1, 1});
  EXPECT_THROW(Partition(a, {LatticeElement::real({1, 0})}), InvalidArgument);
  EXPECT_THROW(Partition(a, {LatticeElement::real({2, 1}), LatticeElement::real({-1, 0})}),
               InvalidArgument);
  EXPECT_THROW(atomic_partition(LatticeElement::real({-1})), InvalidArgument);
  EXPECT_NO_THROW(Partition(a, {LatticeElement::real({0.25, 1}), LatticeElement::real({0.75, 0})}));
}

TEST(Opvar, RandomPartitionSumsToTarget) {
  std::mt19937_64 rng(1);
  const auto a = LatticeElement::real({1, 2, 3});
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_partition(a, rng);
    EXPECT_LE(p.pieces().size(), 64u);
    LatticeElement total = LatticeElement::zero(a.backend());
    for (const auto& piece : p.pieces()) {
      EXPECT_TRUE(is_positive(piece));
      total = total + piece;
    }
    EXPECT_LE(distance_inf(total, a), 1e-12 * 3);
  }
}

TEST(Opvar, VariationOfSignedMatrix) {
  const auto t = MultilinearMap::matrix(2, 2, {1, -2, -3, 4});
  const std::vector<LatticeElement> a{LatticeElement::real({1, 1})};
  const auto atomic = variation_modulus(t, a);
  EXPECT_EQ(atomic.value, LatticeElement::real({3, 7}));
  EXPECT_EQ(atomic.strategy, VariationStrategy::atomic);
  // Independent oracle: 10^4 random partitions never exceed the atomic value.
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> splits(0, 6);
  const auto om = to_oracle(t);
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto pieces = oracle::random_partition({1, 1}, rng, splits(rng));
    const auto sum = oracle::partition_sum(om, {pieces});
    EXPECT_LE(sum[0], 3 + 1e-12);
    EXPECT_LE(sum[1], 7 + 1e-12);
  }
  const auto refined = variation_modulus(t, a, VariationStrategy::random_refinement, 10'000, 5);
  EXPECT_EQ(refined.partitions_evaluated, 10'000u);
  EXPECT_TRUE(less_equal(refined.value, atomic.value, Tolerance{1e-12, 0}));
}

TEST(Opvar, VariationOfPositiveMapIsTheMapItself) {
  const auto t = MultilinearMap::coordinatewise_product(3, 2);
  const std::vector<LatticeElement> a{LatticeElement::real({1, 2, 3}), LatticeElement::real({4, 0, 1})};
  EXPECT_EQ(variation_modulus(t, a).value, latticekit::apply(t, a));
}

TEST(Opvar, VariationOfComplexScalar) {
  const auto t = MultilinearMap::complex_matrix(1, 1, {{3, 4}});
  const std::vector<LatticeElement> a{LatticeElement::real({1})};
  EXPECT_DOUBLE_EQ(variation_modulus(t, a).value[0].real(), 5.0);
  const auto r = variation_modulus(t, a, VariationStrategy::random_refinement, 1000, 3);
  EXPECT_LE(r.value[0].real(), 5.0 + 1e-12);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pieces = oracle::random_partition({1}, rng, 4);
    EXPECT_NEAR(oracle::partition_sum(to_oracle(t), {pieces})[0], 5.0, 1e-12);
  }
}

TEST(Opvar, AtomicMatchesOracleOnRandomMaps) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_map({2, 3}, 2, rng);
    const std::vector<LatticeElement> a{LatticeElement::real({u(rng), u(rng)}),
                                        LatticeElement::real({u(rng), u(rng), u(rng)})};
    const auto v = variation_modulus(t, a).value;
    const auto want = oracle::entrywise_modulus_apply(to_oracle(t), {values(a[0]), values(a[1])});
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(v[j].real(), want[j], 1e-12);
    const auto lower = variation_modulus(t, a, VariationStrategy::random_refinement, 200, trial);
    EXPECT_TRUE(less_equal(lower.value, v, Tolerance{1e-12, 0}));
  }
}

TEST(Opvar, RefinementNeverDecreasesTheSum) {
  std::mt19937_64 rng(8);
  const auto t = random_map({3}, 2, rng);
  const auto a = LatticeElement::real({1, 2, 0.5});
  const auto coarse = random_partition(a, rng, 2);
  std::vector<LatticeElement> finer;
  for (const auto& p : coarse.pieces()) {
    finer.push_back(0.3 * p);
    finer.push_back(0.7 * p);
  }
  const std::vector<Partition> c{coarse};
  const std::vector<Partition> f{Partition(a, finer)};
  EXPECT_TRUE(less_equal(partition_sum(t, c), partition_sum(t, f), Tolerance{1e-12, 0}));
}

TEST(Opvar, VariationValidation) {
  const auto t = MultilinearMap::matrix(1, 2, {1, 1});
  const std::vector<LatticeElement> negative{LatticeElement::real({-1, 1})};
  EXPECT_THROW((void)variation_modulus(t, negative), InvalidArgument);
  const std::vector<LatticeElement> two{LatticeElement::real({1, 1}), LatticeElement::real({1, 1})};
  EXPECT_THROW((void)variation_modulus(t, two), InvalidArgument);
  EXPECT_EQ(strategy_from_string("random-refinement"), VariationStrategy::random_refinement);
  EXPECT_THROW(strategy_from_string("greedy"), InvalidArgument);
}

TEST(Opvar, OrthosymmetryExamples) {
  const auto product = is_orthosymmetric(MultilinearMap::coordinatewise_product(3, 2));
  EXPECT_TRUE(product.holds);
  EXPECT_TRUE(product.agree());
  EXPECT_TRUE(is_orthosymmetric(MultilinearMap::zero({2, 2}, 1)).holds);
  const auto cross = MultilinearMap::real({2, 2}, 1, {0, 1, 0, 0});
  const auto cert = is_orthosymmetric(cross);
  EXPECT_FALSE(cert.holds);
  EXPECT_TRUE(cert.agree());
  ASSERT_TRUE(cert.witness.has_value());
  EXPECT_EQ((*cert.witness)[0], LatticeElement::real({1, 0}));
  EXPECT_EQ((*cert.witness)[1], LatticeElement::real({0, 1}));
  EXPECT_EQ(latticekit::apply(cross, *cert.witness), LatticeElement::real({1}));
  EXPECT_THROW((void)is_orthosymmetric(MultilinearMap::matrix(1, 2, {1, 1})), InvalidArgument);
}

TEST(Opvar, SMorphismExamples) {
  const auto product = is_s_morphism(MultilinearMap::coordinatewise_product(3, 2), 1000, 2);
  EXPECT_TRUE(product.holds);
  EXPECT_TRUE(product.agree());
  const auto sum = MultilinearMap::matrix(1, 2, {1, 1});
  const auto cert = is_s_morphism(sum);
  EXPECT_FALSE(cert.holds);
  ASSERT_TRUE(cert.witness.has_value());
  EXPECT_EQ((*cert.witness)[0], LatticeElement::real({1, -1}));
  const auto f = (*cert.witness)[0];
  EXPECT_EQ(latticekit::apply(sum, {modulus(f)}), LatticeElement::real({2}));
  EXPECT_EQ(latticekit::apply(sum, {f}), LatticeElement::real({0}));
  EXPECT_TRUE(is_s_morphism(MultilinearMap::matrix(3, 3, {2, 0, 0, 0, 0, 0, 0, 0, 5})).holds);
  EXPECT_FALSE(is_s_morphism(MultilinearMap::matrix(1, 1, {-1})).holds);
}

TEST(Opvar, SPowerTwoByTwo) {
  const auto p = s_power(2, 2);
  EXPECT_EQ(p.tensor_dim, 4u);
  EXPECT_EQ(p.ideal_dim(), 2u);
  EXPECT_EQ(p.quotient_dim(), 2u);
  EXPECT_EQ(p.ideal_atoms, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(p.diagonal_atoms, (std::vector<std::size_t>{0, 3}));
  const std::vector<LatticeElement> args{LatticeElement::real({2, 3}), LatticeElement::real({5, 7})};
  EXPECT_EQ(p.apply(args), LatticeElement::real({10, 21}));
  // The power map is the quotient of the tensor map.
  EXPECT_EQ(latticekit::apply(p.quotient, {tensor_embed(args)}), p.apply(args));
}

TEST(Opvar, SPowerDimensions) {
  const auto p = s_power(3, 3);
  EXPECT_EQ(p.tensor_dim, 27u);
  EXPECT_EQ(p.ideal_dim(), 24u);
  EXPECT_EQ(p.quotient_dim(), 3u);
  EXPECT_THROW((void)s_power(3, 1), InvalidArgument);
}

TEST(Opvar, FactorProductThroughPower) {
  const auto p = s_power(3, 2);
  const auto f = factor_through_power(MultilinearMap::coordinatewise_product(3, 2), p);
  EXPECT_EQ(f.linear, MultilinearMap::matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  EXPECT_EQ(f.residual, 0.0);
  const auto scaled = factor_through_power(Complex(2.5) * MultilinearMap::coordinatewise_product(3, 2), p);
  EXPECT_EQ(scaled.linear, MultilinearMap::matrix(3, 3, {2.5, 0, 0, 0, 2.5, 0, 0, 0, 2.5}));
}

TEST(Opvar, FactorThroughPowerRejectsNonOrthosymmetric) {
  const auto cross = MultilinearMap::real({2, 2}, 1, {0, 1, 0, 0});
  try {
    (void)factor_through_power(cross, s_power(2, 2));
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    ASSERT_EQ(e.witness().size(), 2u);
    EXPECT_TRUE(inf(modulus(e.witness()[0]), modulus(e.witness()[1])).is_zero());
    EXPECT_FALSE(latticekit::apply(cross, e.witness()).is_zero());
  }
}

TEST(Opvar, FactorThroughTensor) {
  const auto f = factor_through_tensor(MultilinearMap::coordinatewise_product(2, 2));
  EXPECT_EQ(f.linear, MultilinearMap::matrix(2, 4, {1, 0, 0, 0, 0, 0, 0, 1}));
  EXPECT_EQ(f.residual, 0.0);
  std::mt19937_64 rng(2);
  const auto positive = MultilinearMap::real({2, 3}, 2, {1, 0, 2, 0.5, 0, 3, 0, 0, 1, 1, 1, 4});
  const auto g = factor_through_tensor(positive);
  EXPECT_TRUE(g.source_positive);
  EXPECT_TRUE(g.linear_positive);
  EXPECT_LE(g.residual, 1e-12);
  EXPECT_EQ(unflatten_linear(g.linear, {2, 3}), positive);
  const auto zero = factor_through_tensor(MultilinearMap::zero({2, 2}, 3));
  EXPECT_EQ(zero.linear, MultilinearMap::zero({4}, 3));
}

TEST(Opvar, LbvCorrespondence) {
  const auto cert = check_lbv_isomorphism({2, 2}, 1, 50, 3);
  EXPECT_TRUE(cert.holds());
  EXPECT_LE(cert.max_residual, 1e-10);
  std::mt19937_64 rng(5);
  const auto t = random_map({2, 2}, 1, rng);
  const auto neg = Complex(-1) * t;
  EXPECT_EQ(factor_through_tensor(t).linear.coefficients().size(), 4u);
  const std::vector<LatticeElement> a{LatticeElement::real({1, 2}), LatticeElement::real({0.5, 1})};
  EXPECT_EQ(variation_modulus(t, a).value, variation_modulus(neg, a).value);
  EXPECT_EQ(factor_through_tensor(t).linear.entrywise_modulus(),
            factor_through_tensor(neg).linear.entrywise_modulus());
  // A linear map is its own tensor factorization.
  const auto id = MultilinearMap::matrix(2, 2, {1, 0, 0, 1});
  EXPECT_EQ(factor_through_tensor(id).linear, id);
}
