#include <gtest/gtest.h>

#include "latticekit/axioms.hpp"

using namespace latticekit;

namespace {

const AxiomReport& report(const std::vector<AxiomReport>& reports, AxiomId id) {
  for (const auto& r : reports) {
    if (r.axiom == id) return r;
  }
  throw std::runtime_error("missing report");
}

}  // namespace

TEST(Axioms, BuiltinPassesOnReal3) {
  const auto reports = check_modulus_axioms(builtin_modulus(), Backend::coordinate(3), 1000,
                                            Tolerance{1e-12, 0.0}, 1);
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(reports[0].axiom, AxiomId::idempotency);
  EXPECT_EQ(reports[3].axiom, AxiomId::m3_spanning);
  for (const auto& r : reports) {
    EXPECT_EQ(r.verdict, Verdict::pass) << to_string(r.axiom);
    EXPECT_LE(r.max_residual, 1e-12);
    EXPECT_FALSE(r.witness.has_value());
  }
}

TEST(Axioms, BuiltinPassesOnComplex) {
  const auto reports = check_modulus_axioms(builtin_modulus(), Backend::coordinate(4, Field::complex),
                                            500, Tolerance{1e-12, 0.0}, 2);
  for (const auto& r : reports) EXPECT_EQ(r.verdict, Verdict::pass) << to_string(r.axiom);
}

TEST(Axioms, IdentityFailsHomogeneityWithWitness) {
  const ModulusMap identity = [](const LatticeElement& f) { return f; };
  const auto reports = check_modulus_axioms(identity, Backend::coordinate(1), 100);
  const auto& m1 = report(reports, AxiomId::m1_homogeneity);
  ASSERT_EQ(m1.verdict, Verdict::fail);
  ASSERT_TRUE(m1.witness.has_value());
  ASSERT_EQ(m1.witness->elements.size(), 1u);
  EXPECT_EQ(m1.witness->elements[0], LatticeElement::real({1}));
  ASSERT_EQ(m1.witness->scalars.size(), 1u);
  EXPECT_DOUBLE_EQ(m1.witness->scalars[0].re(), -1.0);
  // m(-f) = -1 against |-1| m(f) = 1
  EXPECT_DOUBLE_EQ(axiom_residual(AxiomId::m1_homogeneity, identity, *m1.witness).value, 2.0);
}

TEST(Axioms, DoubledModulusFailsIdempotency) {
  const ModulusMap doubled = [](const LatticeElement& f) { return 2.0 * modulus(f); };
  const auto reports = check_modulus_axioms(doubled, Backend::coordinate(1), 100);
  const auto& idem = report(reports, AxiomId::idempotency);
  ASSERT_EQ(idem.verdict, Verdict::fail);
  ASSERT_TRUE(idem.witness.has_value());
  EXPECT_EQ(idem.witness->elements.at(0), LatticeElement::real({1}));
  // m(m(f)) = 4 against m(f) = 2
  EXPECT_DOUBLE_EQ(axiom_residual(AxiomId::idempotency, doubled, *idem.witness).value, 2.0);
}

TEST(Axioms, WitnessesReproduceTheirResiduals) {
  const ModulusMap squash = [](const LatticeElement& f) { return hadamard(modulus(f), modulus(f)); };
  const auto reports = check_modulus_axioms(squash, Backend::coordinate(3), 200);
  bool any_fail = false;
  for (const auto& r : reports) {
    if (r.verdict != Verdict::fail) continue;
    any_fail = true;
    ASSERT_TRUE(r.witness.has_value());
    const auto res = axiom_residual(r.axiom, squash, *r.witness);
    EXPECT_FALSE(Tolerance{}.within(res.value, res.scale)) << to_string(r.axiom);
  }
  EXPECT_TRUE(any_fail);
}

TEST(Axioms, NegatedModulusSatisfiesTheAxiomsAsWritten) {
  // -|f| passes idempotency and M1-M3 as stated; recorded as observed behaviour.
  const ModulusMap negated = [](const LatticeElement& f) { return -modulus(f); };
  const auto reports = check_modulus_axioms(negated, Backend::coordinate(2), 200);
  EXPECT_EQ(report(reports, AxiomId::idempotency).verdict, Verdict::pass);
  EXPECT_EQ(report(reports, AxiomId::m1_homogeneity).verdict, Verdict::pass);
  EXPECT_EQ(report(reports, AxiomId::m2_identity).verdict, Verdict::pass);
}

TEST(Axioms, ArchimedeanBreaksAtTwo) {
  const auto r = check_archimedean(builtin_modulus(), LatticeElement::real({1}),
                                   LatticeElement::real({1}), 10);
  EXPECT_EQ(r.verdict, Verdict::pass);
  ASSERT_TRUE(r.first_violation.has_value());
  EXPECT_EQ(*r.first_violation, 2u);
}

TEST(Axioms, ArchimedeanZeroElementHoldsThroughout) {
  const auto r = check_archimedean(builtin_modulus(), LatticeElement::real({0}),
                                   LatticeElement::real({1}), 10);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_FALSE(r.first_violation.has_value());
}

TEST(Axioms, ArchimedeanBreaksAtOneInSecondCoordinate) {
  const auto r = check_archimedean(builtin_modulus(), LatticeElement::real({0, 1}),
                                   LatticeElement::real({1, 0}), 5);
  ASSERT_TRUE(r.first_violation.has_value());
  EXPECT_EQ(*r.first_violation, 1u);
}

TEST(Axioms, ArchimedeanFailsForIdentityCandidate) {
  const ModulusMap identity = [](const LatticeElement& f) { return f; };
  const auto r = check_archimedean(identity, LatticeElement::real({1}), LatticeElement::real({1}), 10);
  EXPECT_EQ(r.verdict, Verdict::fail);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_DOUBLE_EQ(r.witness->scalars.at(0).re(), 10.0);
}

TEST(Axioms, IdRoundTrip) {
  for (auto id : {AxiomId::idempotency, AxiomId::m1_homogeneity, AxiomId::m2_identity,
                  AxiomId::m3_spanning, AxiomId::archimedean}) {
    EXPECT_EQ(axiom_from_string(to_string(id)), id);
  }
  EXPECT_THROW(axiom_from_string("nope"), InvalidArgument);
}
