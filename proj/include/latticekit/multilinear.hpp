#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "latticekit/core.hpp"

namespace latticekit {

/// Dense s-linear map between coordinate lattices,
///   T(f_1, ..., f_s)[j] = sum t[j, i_1, ..., i_s] * f_1[i_1] * ... * f_s[i_s].
/// Coefficients are stored row-major in (j, i_1, ..., i_s), i_s fastest.
class MultilinearMap {
 public:
  MultilinearMap(std::vector<std::size_t> domain_dims, std::size_t codomain_dim,
                 std::vector<Complex> coefficients, Field field);

  static MultilinearMap real(std::vector<std::size_t> domain_dims, std::size_t codomain_dim,
                             std::vector<double> coefficients);
  static MultilinearMap zero(std::vector<std::size_t> domain_dims, std::size_t codomain_dim,
                             Field field = Field::real);
  /// s = 1 map from a row-major rows x cols matrix.
  static MultilinearMap matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  static MultilinearMap complex_matrix(std::size_t rows, std::size_t cols,
                                       std::vector<Complex> entries);
  /// (f_1, ..., f_s) -> coordinatewise product, K^n x ... x K^n -> K^n.
  static MultilinearMap coordinatewise_product(std::size_t n, std::size_t s);

  std::size_t arity() const noexcept { return domain_dims_.size(); }
  const std::vector<std::size_t>& domain_dims() const noexcept { return domain_dims_; }
  std::size_t codomain_dim() const noexcept { return codomain_dim_; }
  Field field() const noexcept { return field_; }
  /// Product of the domain dimensions.
  std::size_t input_count() const noexcept { return input_count_; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }

  std::size_t flat_index(std::size_t j, std::span<const std::size_t> indices) const;
  Complex coefficient(std::size_t j, std::span<const std::size_t> indices) const;
  /// Coefficient at output j and flattened input multi-index.
  Complex coefficient_flat(std::size_t j, std::size_t input) const {
    return coefficients_[j * input_count_ + input];
  }
  /// Unflattens an input multi-index.
  std::vector<std::size_t> unflatten(std::size_t input) const;

  /// Entrywise |t|; the result is a real map.
  MultilinearMap entrywise_modulus() const;
  /// Entrywise Re(t) or Im(t) as real maps.
  MultilinearMap real_part() const;
  MultilinearMap imag_part() const;
  MultilinearMap as_field(Field field) const;

  bool is_real_valued() const;
  bool is_positive() const;
  double max_abs() const;

  bool same_shape(const MultilinearMap& other) const;

  bool operator==(const MultilinearMap& other) const = default;

 private:
  std::vector<std::size_t> domain_dims_;
  std::size_t codomain_dim_;
  std::size_t input_count_;
  std::vector<Complex> coefficients_;
  Field field_;
};

MultilinearMap operator+(const MultilinearMap& a, const MultilinearMap& b);
MultilinearMap operator-(const MultilinearMap& a, const MultilinearMap& b);
MultilinearMap operator*(Complex alpha, const MultilinearMap& a);

/// max |a - b| over coefficients.
double coefficient_distance(const MultilinearMap& a, const MultilinearMap& b);

/// Evaluates T on s coordinate-lattice arguments.
LatticeElement apply(const MultilinearMap& map, std::span<const LatticeElement> args);
LatticeElement apply(const MultilinearMap& map, std::initializer_list<LatticeElement> args);

/// f_1 (x) ... (x) f_s as an element of the coordinate lattice of dimension
/// prod n_k, flattened with the last factor fastest.
LatticeElement tensor_embed(std::span<const LatticeElement> args);

}  // namespace latticekit
