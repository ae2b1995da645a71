#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "latticekit/error.hpp"

namespace latticekit {

using Complex = std::complex<double>;

enum class Field { real, complex };

std::string to_string(Field field);
Field field_from_string(const std::string& name);

/// A scalar of the ground field. Real scalars keep im == 0.
class Scalar {
 public:
  Scalar(double value);  // NOLINT(google-explicit-constructor)
  Scalar(Complex value);  // NOLINT(google-explicit-constructor)
  Scalar(double re, double im);

  Field field() const noexcept { return field_; }
  double re() const noexcept { return value_.real(); }
  double im() const noexcept { return value_.imag(); }
  Complex value() const noexcept { return value_; }
  double magnitude() const { return std::abs(value_); }

 private:
  Field field_;
  Complex value_;
};

/// Absolute plus relative comparison threshold: residual <= abs + rel * scale.
struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;

  bool within(double residual, double scale) const {
    return residual <= abs + rel * scale;
  }
};

/// Carrier of a concrete lattice: either the coordinate lattice K^n or
/// functions sampled on a (product) grid of strictly increasing points.
class Backend {
 public:
  enum class Kind { coordinate, grid };

  static Backend coordinate(std::size_t dimension, Field field = Field::real);
  static Backend grid(std::vector<double> points, Field field = Field::real);
  static Backend product_grid(std::vector<std::vector<double>> axes,
                              Field field = Field::real);

  Kind kind() const noexcept { return kind_; }
  Field field() const noexcept { return field_; }
  std::size_t dimension() const noexcept { return dimension_; }
  /// Sample axes; empty for coordinate backends.
  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }

  Backend with_field(Field field) const;

  /// Same carrier set up to the field tag.
  bool same_carrier(const Backend& other) const;

  bool operator==(const Backend& other) const = default;

 private:
  Backend(Kind kind, std::size_t dimension, Field field,
          std::vector<std::vector<double>> axes);

  Kind kind_;
  std::size_t dimension_;
  Field field_;
  std::vector<std::vector<double>> axes_;
};

std::string to_string(Backend::Kind kind);

/// Immutable element of a concrete lattice. Complex elements carry an
/// imaginary part of the same length; real elements carry none.
class LatticeElement {
 public:
  LatticeElement(Backend backend, std::vector<double> re);
  LatticeElement(Backend backend, std::vector<double> re, std::vector<double> im);

  static LatticeElement zero(const Backend& backend);
  /// Real coordinate element, dimension taken from the value count.
  static LatticeElement real(std::initializer_list<double> values);
  static LatticeElement real(std::vector<double> values);
  static LatticeElement complex(std::vector<Complex> values);
  /// e_index in the coordinate (or grid) backend.
  static LatticeElement atom(const Backend& backend, std::size_t index);

  const Backend& backend() const noexcept { return backend_; }
  Field field() const noexcept { return backend_.field(); }
  bool is_complex() const noexcept { return backend_.field() == Field::complex; }
  std::size_t size() const noexcept { return re_.size(); }

  std::span<const double> re() const noexcept { return re_; }
  /// Empty for real elements.
  std::span<const double> im() const noexcept { return im_; }

  Complex operator[](std::size_t i) const;

  LatticeElement real_part() const;
  LatticeElement imag_part() const;
  LatticeElement as_complex() const;

  /// max_i |f_i| with the complex magnitude for complex elements.
  double norm_inf() const;
  bool is_zero() const;

  bool operator==(const LatticeElement& other) const = default;

 private:
  Backend backend_;
  std::vector<double> re_;
  std::vector<double> im_;
};

LatticeElement operator+(const LatticeElement& f, const LatticeElement& g);
LatticeElement operator-(const LatticeElement& f, const LatticeElement& g);
LatticeElement operator-(const LatticeElement& f);
LatticeElement operator*(double alpha, const LatticeElement& f);
LatticeElement operator*(Complex alpha, const LatticeElement& f);
LatticeElement operator*(const Scalar& alpha, const LatticeElement& f);

/// Coordinatewise maximum. Both elements must be real with one backend.
LatticeElement sup(const LatticeElement& f, const LatticeElement& g);
LatticeElement inf(const LatticeElement& f, const LatticeElement& g);

/// |f|: coordinatewise absolute value, or complex magnitude for complex
/// elements. The result is always a real element.
LatticeElement modulus(const LatticeElement& f);

LatticeElement positive_part(const LatticeElement& f);
LatticeElement negative_part(const LatticeElement& f);

/// Coordinatewise product of real elements.
LatticeElement hadamard(const LatticeElement& f, const LatticeElement& g);

bool is_positive(const LatticeElement& f);
/// f <= g coordinatewise, within tolerance scaled by max(|f|,|g|).
bool less_equal(const LatticeElement& f, const LatticeElement& g,
                const Tolerance& tol = {});

/// ||f - g||_inf
double distance_inf(const LatticeElement& f, const LatticeElement& g);
bool approx_equal(const LatticeElement& f, const LatticeElement& g,
                  const Tolerance& tol = {});

/// Throws BackendMismatch unless the carriers agree.
void require_same_carrier(const LatticeElement& f, const LatticeElement& g);

}  // namespace latticekit
