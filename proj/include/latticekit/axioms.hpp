#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latticekit/core.hpp"

namespace latticekit {

enum class AxiomId { idempotency, m1_homogeneity, m2_identity, m3_spanning, archimedean };
enum class Verdict { pass, fail };

std::string to_string(AxiomId id);
std::string to_string(Verdict verdict);
AxiomId axiom_from_string(const std::string& name);

/// Inputs on which an axiom was evaluated. For the Archimedean condition the
/// single scalar is the depth N that was searched.
struct Witness {
  std::vector<LatticeElement> elements;
  std::vector<Scalar> scalars;
};

struct AxiomReport {
  AxiomId axiom = AxiomId::idempotency;
  Verdict verdict = Verdict::pass;
  std::optional<Witness> witness;
  double max_residual = 0.0;
  /// Archimedean only: least n at which m(m(g) - n m(f)) != m(g) - n m(f).
  std::optional<std::size_t> first_violation;
  std::size_t samples = 0;
};

using ModulusMap = std::function<LatticeElement(const LatticeElement&)>;

/// Built-in modulus as a ModulusMap.
ModulusMap builtin_modulus();

/// Randomised check of idempotency and the three modulus axioms; one
/// report per axiom in the order idempotency, M1, M2, M3. Canonical probes
/// (atoms, alpha = -1, 2, i) run before the seeded random samples, so the
/// reported witness is the first failing probe.
std::vector<AxiomReport> check_modulus_axioms(const ModulusMap& candidate,
                                              const Backend& backend,
                                              std::size_t sample_count,
                                              const Tolerance& tol = {},
                                              std::uint64_t seed = 0);

/// Tests m(m(g) - n m(f)) = m(g) - n m(f) for n = 1..max_n. Passes when the
/// condition breaks for some n (or f = 0); fails with witness (f, g, max_n)
/// when it holds throughout for non-zero f.
AxiomReport check_archimedean(const ModulusMap& candidate, const LatticeElement& f,
                              const LatticeElement& g, std::size_t max_n,
                              const Tolerance& tol = {});

/// Re-evaluates one axiom on a witness and returns the residual together
/// with the scale the tolerance is relative to.
struct Residual {
  double value = 0.0;
  double scale = 0.0;
};
Residual axiom_residual(AxiomId axiom, const ModulusMap& candidate, const Witness& witness);

}  // namespace latticekit
