#include "latticekit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latticekit {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string("non-finite ") + what + " coordinate");
    }
  }
}

void require_real(const LatticeElement& f) {
  if (f.is_complex()) throw OrderUndefined();
}

// Applies op coordinatewise to two real elements on one carrier.
template <class Op>
LatticeElement zip_real(const LatticeElement& f, const LatticeElement& g, Op op) {
  require_same_carrier(f, g);
  require_real(f);
  require_real(g);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f.re()[i], g.re()[i]);
  return {f.backend(), std::move(out)};
}

template <class Op>
LatticeElement map_real(const LatticeElement& f, Op op) {
  require_real(f);
  std::vector<double> out(f.size());
  std::transform(f.re().begin(), f.re().end(), out.begin(), op);
  return {f.backend(), std::move(out)};
}

}  // namespace

std::string to_string(Field field) {
  return field == Field::real ? "real" : "complex";
}

Field field_from_string(const std::string& name) {
  if (name == "real") return Field::real;
  if (name == "complex") return Field::complex;
  throw InvalidArgument("unknown field tag '" + name + "'");
}

std::string to_string(Backend::Kind kind) {
  return kind == Backend::Kind::coordinate ? "coordinate" : "grid-function";
}

// Scalar -------------------------------------------------------------------

Scalar::Scalar(double value) : field_(Field::real), value_(value, 0.0) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite scalar");
}

Scalar::Scalar(Complex value) : field_(Field::complex), value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw InvalidArgument("non-finite scalar");
  }
}

Scalar::Scalar(double re, double im) : Scalar(Complex(re, im)) {}

// Backend ------------------------------------------------------------------

Backend::Backend(Kind kind, std::size_t dimension, Field field,
                 std::vector<std::vector<double>> axes)
    : kind_(kind), dimension_(dimension), field_(field), axes_(std::move(axes)) {}

Backend Backend::coordinate(std::size_t dimension, Field field) {
  if (dimension == 0) throw InvalidArgument("backend dimension must be >= 1");
  return {Kind::coordinate, dimension, field, {}};
}

Backend Backend::grid(std::vector<double> points, Field field) {
  return product_grid({std::move(points)}, field);
}

Backend Backend::product_grid(std::vector<std::vector<double>> axes, Field field) {
  if (axes.empty()) throw InvalidArgument("grid backend needs at least one axis");
  std::size_t dimension = 1;
  for (const auto& axis : axes) {
    if (axis.empty()) throw InvalidArgument("backend dimension must be >= 1");
    require_finite(axis, "grid sample");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i - 1] < axis[i])) {
        throw InvalidArgument("grid sample points must be strictly increasing");
      }
    }
    dimension *= axis.size();
  }
  return {Kind::grid, dimension, field, std::move(axes)};
}

Backend Backend::with_field(Field field) const {
  Backend out = *this;
  out.field_ = field;
  return out;
}

bool Backend::same_carrier(const Backend& other) const {
  return kind_ == other.kind_ && dimension_ == other.dimension_ && axes_ == other.axes_;
}

// LatticeElement -----------------------------------------------------------

LatticeElement::LatticeElement(Backend backend, std::vector<double> re)
    : backend_(backend.with_field(Field::real)), re_(std::move(re)) {
  if (re_.size() != backend_.dimension()) {
    throw InvalidArgument("coordinate count " + std::to_string(re_.size()) +
                          " does not match backend dimension " +
                          std::to_string(backend_.dimension()));
  }
  require_finite(re_, "real");
}

LatticeElement::LatticeElement(Backend backend, std::vector<double> re,
                               std::vector<double> im)
    : backend_(backend.with_field(Field::complex)), re_(std::move(re)), im_(std::move(im)) {
  if (re_.size() != backend_.dimension() || im_.size() != backend_.dimension()) {
    throw InvalidArgument("coordinate count does not match backend dimension " +
                          std::to_string(backend_.dimension()));
  }
  require_finite(re_, "real");
  require_finite(im_, "imaginary");
}

LatticeElement LatticeElement::zero(const Backend& backend) {
  std::vector<double> re(backend.dimension(), 0.0);
  if (backend.field() == Field::complex) {
    return {backend, std::move(re), std::vector<double>(backend.dimension(), 0.0)};
  }
  return {backend, std::move(re)};
}

LatticeElement LatticeElement::real(std::initializer_list<double> values) {
  return real(std::vector<double>(values));
}

LatticeElement LatticeElement::real(std::vector<double> values) {
  auto backend = Backend::coordinate(values.size());
  return {backend, std::move(values)};
}

LatticeElement LatticeElement::complex(std::vector<Complex> values) {
  std::vector<double> re(values.size());
  std::vector<double> im(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  auto backend = Backend::coordinate(values.size(), Field::complex);
  return {backend, std::move(re), std::move(im)};
}

LatticeElement LatticeElement::atom(const Backend& backend, std::size_t index) {
  if (index >= backend.dimension()) throw InvalidArgument("atom index out of range");
  auto e = zero(backend);
  e.re_[index] = 1.0;
  return e;
}

Complex LatticeElement::operator[](std::size_t i) const {
  return {re_.at(i), im_.empty() ? 0.0 : im_.at(i)};
}

LatticeElement LatticeElement::real_part() const { return {backend_, re_}; }

LatticeElement LatticeElement::imag_part() const {
  if (im_.empty()) return zero(backend_.with_field(Field::real));
  return {backend_, im_};
}

LatticeElement LatticeElement::as_complex() const {
  if (is_complex()) return *this;
  return {backend_, re_, std::vector<double>(re_.size(), 0.0)};
}

double LatticeElement::norm_inf() const {
  double out = 0.0;
  for (std::size_t i = 0; i < re_.size(); ++i) {
    out = std::max(out, im_.empty() ? std::abs(re_[i]) : std::hypot(re_[i], im_[i]));
  }
  return out;
}

bool LatticeElement::is_zero() const {
  auto nz = [](double v) { return v != 0.0; };
  return std::none_of(re_.begin(), re_.end(), nz) && std::none_of(im_.begin(), im_.end(), nz);
}

// Arithmetic ---------------------------------------------------------------

void require_same_carrier(const LatticeElement& f, const LatticeElement& g) {
  if (!f.backend().same_carrier(g.backend())) {
    throw BackendMismatch("mismatched backends");
  }
}

LatticeElement operator+(const LatticeElement& f, const LatticeElement& g) {
  require_same_carrier(f, g);
  if (!f.is_complex() && !g.is_complex()) {
    return zip_real(f, g, std::plus<>());
  }
  auto a = f.as_complex();
  auto b = g.as_complex();
  std::vector<double> re(a.size());
  std::vector<double> im(a.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = a.re()[i] + b.re()[i];
    im[i] = a.im()[i] + b.im()[i];
  }
  return {f.backend(), std::move(re), std::move(im)};
}

LatticeElement operator-(const LatticeElement& f) { return -1.0 * f; }

LatticeElement operator-(const LatticeElement& f, const LatticeElement& g) {
  require_same_carrier(f, g);
  if (!f.is_complex() && !g.is_complex()) {
    return zip_real(f, g, std::minus<>());
  }
  auto a = f.as_complex();
  auto b = g.as_complex();
  std::vector<double> re(a.size());
  std::vector<double> im(a.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = a.re()[i] - b.re()[i];
    im[i] = a.im()[i] - b.im()[i];
  }
  return {f.backend(), std::move(re), std::move(im)};
}

LatticeElement operator*(double alpha, const LatticeElement& f) {
  std::vector<double> re(f.re().begin(), f.re().end());
  for (double& v : re) v *= alpha;
  if (!f.is_complex()) return {f.backend(), std::move(re)};
  std::vector<double> im(f.im().begin(), f.im().end());
  for (double& v : im) v *= alpha;
  return {f.backend(), std::move(re), std::move(im)};
}

LatticeElement operator*(Complex alpha, const LatticeElement& f) {
  auto z = f.as_complex();
  std::vector<double> re(z.size());
  std::vector<double> im(z.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    const Complex v = alpha * z[i];
    re[i] = v.real();
    im[i] = v.imag();
  }
  return {f.backend(), std::move(re), std::move(im)};
}

LatticeElement operator*(const Scalar& alpha, const LatticeElement& f) {
  if (alpha.field() == Field::real) return alpha.re() * f;
  return alpha.value() * f;
}

LatticeElement sup(const LatticeElement& f, const LatticeElement& g) {
  return zip_real(f, g, [](double a, double b) { return std::max(a, b); });
}

LatticeElement inf(const LatticeElement& f, const LatticeElement& g) {
  return zip_real(f, g, [](double a, double b) { return std::min(a, b); });
}

LatticeElement modulus(const LatticeElement& f) {
  if (!f.is_complex()) {
    return map_real(f, [](double v) { return std::abs(v); });
  }
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(f.re()[i], f.im()[i]);
  return {f.backend().with_field(Field::real), std::move(out)};
}

LatticeElement positive_part(const LatticeElement& f) {
  return map_real(f, [](double v) { return std::max(v, 0.0); });
}

LatticeElement negative_part(const LatticeElement& f) {
  return map_real(f, [](double v) { return std::max(-v, 0.0); });
}

LatticeElement hadamard(const LatticeElement& f, const LatticeElement& g) {
  return zip_real(f, g, std::multiplies<>());
}

bool is_positive(const LatticeElement& f) {
  require_real(f);
  return std::all_of(f.re().begin(), f.re().end(), [](double v) { return v >= 0.0; });
}

bool less_equal(const LatticeElement& f, const LatticeElement& g, const Tolerance& tol) {
  require_same_carrier(f, g);
  require_real(f);
  require_real(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f.re()[i];
    const double b = g.re()[i];
    if (a > b && !tol.within(a - b, std::max(std::abs(a), std::abs(b)))) return false;
  }
  return true;
}

double distance_inf(const LatticeElement& f, const LatticeElement& g) {
  return (f - g).norm_inf();
}

bool approx_equal(const LatticeElement& f, const LatticeElement& g, const Tolerance& tol) {
  if (!f.backend().same_carrier(g.backend())) return false;
  return tol.within(distance_inf(f, g), std::max(f.norm_inf(), g.norm_inf()));
}

}  // namespace latticekit
