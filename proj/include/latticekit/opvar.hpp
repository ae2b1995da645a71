#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "latticekit/core.hpp"
#include "latticekit/error.hpp"
#include "latticekit/multilinear.hpp"

namespace latticekit {

/// Positive pieces summing to a positive target.
class Partition {
 public:
  Partition(LatticeElement target, std::vector<LatticeElement> pieces);

  const LatticeElement& target() const noexcept { return target_; }
  const std::vector<LatticeElement>& pieces() const noexcept { return pieces_; }

 private:
  LatticeElement target_;
  std::vector<LatticeElement> pieces_;
};

/// Pieces a_i e_i for the non-zero coordinates of a.
Partition atomic_partition(const LatticeElement& a);

/// Recursive random splits p -> (w p, p - w p) with w uniform in (0, 1)
/// coordinatewise; each piece splits with probability 1/2, up to max_depth.
Partition random_partition(const LatticeElement& a, std::mt19937_64& rng, int max_depth = 6);

/// sum over piece tuples of |T(x^1_{n_1}, ..., x^s_{n_s})|.
LatticeElement partition_sum(const MultilinearMap& map, std::span<const Partition> partitions);

enum class VariationStrategy { atomic, random_refinement };

std::string to_string(VariationStrategy strategy);
VariationStrategy strategy_from_string(const std::string& name);

struct VariationResult {
  LatticeElement value;
  VariationStrategy strategy = VariationStrategy::atomic;
  std::size_t partitions_evaluated = 0;
};

/// Partition supremum of sum |T(...)| over partitions of the targets. The atomic
/// strategy attains it on coordinate lattices; random refinement returns the
/// join over `budget` sampled partition tuples, a lower bound.
VariationResult variation_modulus(const MultilinearMap& map, std::span<const LatticeElement> targets,
                                  VariationStrategy strategy = VariationStrategy::atomic,
                                  std::size_t budget = 1, std::uint64_t seed = 0);

/// Outcome of a structural check confirmed by random evaluation. The witness
/// holds the arguments on which the property failed.
struct Certificate {
  bool holds = true;
  bool structural = true;
  bool sampled = true;
  std::optional<std::vector<LatticeElement>> witness;
  std::string detail;
  double max_residual = 0.0;
  std::size_t samples = 0;

  bool agree() const { return structural == sampled; }
};

/// T vanishes whenever two arguments are disjoint. Needs equal domain dims, s >= 2.
Certificate is_orthosymmetric(const MultilinearMap& map, std::size_t sample_count = 100,
                              std::uint64_t seed = 0);

/// T(..., |f_k|, ...) = |T(..., f_k, ...)| for positive other slots. Real maps only.
Certificate is_s_morphism(const MultilinearMap& map, std::size_t sample_count = 100,
                          std::uint64_t seed = 0);

/// The s-power of the coordinate lattice R^n: the tensor lattice of dimension
/// n^s modulo the ideal spanned by off-diagonal atoms, identified with R^n.
struct SPower {
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t tensor_dim = 0;
  /// Flat tensor indices of the off-diagonal atoms spanning the ideal.
  std::vector<std::size_t> ideal_atoms;
  /// Flat tensor index of e_i (x) ... (x) e_i, for each i.
  std::vector<std::size_t> diagonal_atoms;
  /// Quotient map R^(n^s) -> R^n (an s = 1 map).
  MultilinearMap quotient;
  /// Coordinatewise product R^n x ... x R^n -> R^n.
  MultilinearMap power_map;

  std::size_t ideal_dim() const { return ideal_atoms.size(); }
  std::size_t quotient_dim() const { return diagonal_atoms.size(); }
  LatticeElement apply(std::span<const LatticeElement> args) const;
};

SPower s_power(std::size_t n, std::size_t s);

/// Raised when factorization preconditions fail; carries the failing arguments.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& message, std::vector<LatticeElement> witness)
      : Error(message), witness_(std::move(witness)) {}
  const std::vector<LatticeElement>& witness() const noexcept { return witness_; }

 private:
  std::vector<LatticeElement> witness_;
};

struct Factorization {
  /// The induced linear map (s = 1).
  MultilinearMap linear;
  /// max over samples of |L(embed(f)) - T(f)|_inf / scale.
  double residual = 0.0;
  std::size_t samples = 0;
  bool source_positive = false;
  bool linear_positive = false;
};

/// T^pow with T^pow(e_i) = T(e_i, ..., e_i) and T^pow o pow = T.
Factorization factor_through_power(const MultilinearMap& map, const SPower& power,
                                   std::size_t sample_count = 100, std::uint64_t seed = 0);

/// T^tensor with T^tensor(e_i1 (x) ... (x) e_is) = T(e_i1, ..., e_is).
Factorization factor_through_tensor(const MultilinearMap& map, std::size_t sample_count = 100,
                                    std::uint64_t seed = 0);

/// Reads a linear map on the tensor lattice back as an s-linear map.
MultilinearMap unflatten_linear(const MultilinearMap& linear, std::vector<std::size_t> domain_dims);

struct LbvCertificate {
  bool linear = true;
  bool bijective = true;
  bool positive_both_ways = true;
  bool modulus_correspondence = true;
  double max_residual = 0.0;
  std::size_t samples = 0;

  bool holds() const { return linear && bijective && positive_both_ways && modulus_correspondence; }
};

/// Samples random s-linear maps and checks that T -> T^tensor is a linear,
/// bijective, bipositive correspondence carrying the variation modulus to the
/// entrywise modulus.
LbvCertificate check_lbv_isomorphism(const std::vector<std::size_t>& domain_dims,
                                     std::size_t codomain_dim, std::size_t sample_count = 100,
                                     std::uint64_t seed = 0);

/// Random real map with coefficients uniform in [-1, 1].
MultilinearMap random_map(const std::vector<std::size_t>& domain_dims, std::size_t codomain_dim,
                          std::mt19937_64& rng);

}  // namespace latticekit
