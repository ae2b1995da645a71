#include "latticekit/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace latticekit {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

template <class Op>
MultilinearMap map_coefficients(const MultilinearMap& a, Field field, Op op) {
  std::vector<Complex> out(a.coefficients().size());
  std::transform(a.coefficients().begin(), a.coefficients().end(), out.begin(), op);
  return {a.domain_dims(), a.codomain_dim(), std::move(out), field};
}

Field join_field(Field a, Field b) {
  return (a == Field::complex || b == Field::complex) ? Field::complex : Field::real;
}

}  // namespace

MultilinearMap::MultilinearMap(std::vector<std::size_t> domain_dims, std::size_t codomain_dim,
                               std::vector<Complex> coefficients, Field field)
    : domain_dims_(std::move(domain_dims)),
      codomain_dim_(codomain_dim),
      input_count_(product(domain_dims_)),
      coefficients_(std::move(coefficients)),
      field_(field) {
  if (domain_dims_.empty()) throw InvalidArgument("multilinear map needs arity >= 1");
  if (codomain_dim_ == 0) throw InvalidArgument("codomain dimension must be >= 1");
  if (std::find(domain_dims_.begin(), domain_dims_.end(), 0) != domain_dims_.end()) {
    throw InvalidArgument("domain dimensions must be >= 1");
  }
  if (coefficients_.size() != codomain_dim_ * input_count_) {
    throw InvalidArgument("coefficient count " + std::to_string(coefficients_.size()) +
                          " does not match shape (" + std::to_string(codomain_dim_ * input_count_) +
                          " expected)");
  }
  for (const auto& c : coefficients_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgument("non-finite coefficient");
    }
    if (field_ == Field::real && c.imag() != 0.0) {
      throw InvalidArgument("real map with non-zero imaginary coefficient");
    }
  }
}

MultilinearMap MultilinearMap::real(std::vector<std::size_t> domain_dims,
                                    std::size_t codomain_dim, std::vector<double> coefficients) {
  std::vector<Complex> c(coefficients.begin(), coefficients.end());
  return {std::move(domain_dims), codomain_dim, std::move(c), Field::real};
}

MultilinearMap MultilinearMap::zero(std::vector<std::size_t> domain_dims,
                                    std::size_t codomain_dim, Field field) {
  const std::size_t count = codomain_dim * product(domain_dims);
  return {std::move(domain_dims), codomain_dim, std::vector<Complex>(count), field};
}

MultilinearMap MultilinearMap::matrix(std::size_t rows, std::size_t cols,
                                      std::vector<double> entries) {
  return real({cols}, rows, std::move(entries));
}

MultilinearMap MultilinearMap::complex_matrix(std::size_t rows, std::size_t cols,
                                              std::vector<Complex> entries) {
  return {{cols}, rows, std::move(entries), Field::complex};
}

MultilinearMap MultilinearMap::coordinatewise_product(std::size_t n, std::size_t s) {
  auto out = zero(std::vector<std::size_t>(s, n), n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> idx(s, i);
    out.coefficients_[out.flat_index(i, idx)] = 1.0;
  }
  return out;
}

std::size_t MultilinearMap::flat_index(std::size_t j, std::span<const std::size_t> indices) const {
  if (indices.size() != arity()) throw InvalidArgument("arity mismatch");
  if (j >= codomain_dim_) throw InvalidArgument("output index out of range");
  std::size_t flat = j;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= domain_dims_[k]) throw InvalidArgument("input index out of range");
    flat = flat * domain_dims_[k] + indices[k];
  }
  return flat;
}

Complex MultilinearMap::coefficient(std::size_t j, std::span<const std::size_t> indices) const {
  return coefficients_[flat_index(j, indices)];
}

std::vector<std::size_t> MultilinearMap::unflatten(std::size_t input) const {
  std::vector<std::size_t> idx(arity());
  for (std::size_t k = arity(); k-- > 0;) {
    idx[k] = input % domain_dims_[k];
    input /= domain_dims_[k];
  }
  return idx;
}

MultilinearMap MultilinearMap::entrywise_modulus() const {
  return map_coefficients(*this, Field::real, [](Complex c) { return Complex(std::abs(c)); });
}

MultilinearMap MultilinearMap::real_part() const {
  return map_coefficients(*this, Field::real, [](Complex c) { return Complex(c.real()); });
}

MultilinearMap MultilinearMap::imag_part() const {
  return map_coefficients(*this, Field::real, [](Complex c) { return Complex(c.imag()); });
}

MultilinearMap MultilinearMap::as_field(Field field) const {
  return {domain_dims_, codomain_dim_, coefficients_, field};
}

bool MultilinearMap::is_real_valued() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](Complex c) { return c.imag() == 0.0; });
}

bool MultilinearMap::is_positive() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](Complex c) { return c.imag() == 0.0 && c.real() >= 0.0; });
}

double MultilinearMap::max_abs() const {
  double out = 0.0;
  for (const auto& c : coefficients_) out = std::max(out, std::abs(c));
  return out;
}

bool MultilinearMap::same_shape(const MultilinearMap& other) const {
  return domain_dims_ == other.domain_dims_ && codomain_dim_ == other.codomain_dim_;
}

MultilinearMap operator+(const MultilinearMap& a, const MultilinearMap& b) {
  if (!a.same_shape(b)) throw InvalidArgument("map shape mismatch");
  std::vector<Complex> c(a.coefficients().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficients()[i] + b.coefficients()[i];
  return {a.domain_dims(), a.codomain_dim(), std::move(c), join_field(a.field(), b.field())};
}

MultilinearMap operator-(const MultilinearMap& a, const MultilinearMap& b) {
  return a + Complex(-1.0) * b;
}

MultilinearMap operator*(Complex alpha, const MultilinearMap& a) {
  const Field field = alpha.imag() == 0.0 ? a.field() : Field::complex;
  return map_coefficients(a, field, [alpha](Complex c) { return alpha * c; });
}

double coefficient_distance(const MultilinearMap& a, const MultilinearMap& b) {
  if (!a.same_shape(b)) throw InvalidArgument("map shape mismatch");
  double out = 0.0;
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
    out = std::max(out, std::abs(a.coefficients()[i] - b.coefficients()[i]));
  }
  return out;
}

LatticeElement apply(const MultilinearMap& map, std::span<const LatticeElement> args) {
  if (args.size() != map.arity()) {
    throw InvalidArgument("arity mismatch: map takes " + std::to_string(map.arity()) +
                          " arguments, got " + std::to_string(args.size()));
  }
  Field field = map.field();
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k].backend().kind() != Backend::Kind::coordinate ||
        args[k].size() != map.domain_dims()[k]) {
      throw InvalidArgument("dimension mismatch in argument " + std::to_string(k + 1));
    }
    field = join_field(field, args[k].field());
  }

  // Contract the trailing slot repeatedly: buffer holds (j, i_1..i_k).
  std::vector<Complex> buffer(map.coefficients().begin(), map.coefficients().end());
  for (std::size_t k = args.size(); k-- > 0;) {
    const std::size_t n = map.domain_dims()[k];
    std::vector<Complex> next(buffer.size() / n);
    for (std::size_t r = 0; r < next.size(); ++r) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += buffer[r * n + i] * args[k][i];
      next[r] = acc;
    }
    buffer = std::move(next);
  }

  const auto backend = Backend::coordinate(map.codomain_dim(), field);
  std::vector<double> re(buffer.size());
  for (std::size_t j = 0; j < re.size(); ++j) re[j] = buffer[j].real();
  if (field == Field::real) return {backend, std::move(re)};
  std::vector<double> im(buffer.size());
  for (std::size_t j = 0; j < im.size(); ++j) im[j] = buffer[j].imag();
  return {backend, std::move(re), std::move(im)};
}

LatticeElement apply(const MultilinearMap& map, std::initializer_list<LatticeElement> args) {
  return apply(map, std::span<const LatticeElement>(args.begin(), args.size()));
}

LatticeElement tensor_embed(std::span<const LatticeElement> args) {
  if (args.empty()) throw InvalidArgument("tensor product of zero factors");
  Field field = Field::real;
  std::vector<Complex> acc{1.0};
  for (const auto& f : args) {
    if (f.backend().kind() != Backend::Kind::coordinate) {
      throw InvalidArgument("tensor_embed expects coordinate elements");
    }
    field = join_field(field, f.field());
    std::vector<Complex> next;
    next.reserve(acc.size() * f.size());
    for (const auto& a : acc) {
      for (std::size_t i = 0; i < f.size(); ++i) next.push_back(a * f[i]);
    }
    acc = std::move(next);
  }
  const auto backend = Backend::coordinate(acc.size(), field);
  std::vector<double> re(acc.size());
  std::vector<double> im(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    re[i] = acc[i].real();
    im[i] = acc[i].imag();
  }
  if (field == Field::real) return {backend, std::move(re)};
  return {backend, std::move(re), std::move(im)};
}

}  // namespace latticekit
