#include "latticekit/complexify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace latticekit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_depth(int m) {
  if (m < 1) throw InvalidArgument("depth m must be >= 1");
  if (m > 24) throw InvalidArgument("depth m too large");
}

struct ThetaGrid {
  std::vector<double> cos;
  std::vector<double> sin;
  double step;
};

// theta_l = l pi / 2^(m+1), l = 0..2^(m+2); quarter turns are set exactly.
ThetaGrid theta_grid(int m) {
  const std::size_t quarter = std::size_t{1} << m;
  const std::size_t points = 4 * quarter + 1;
  ThetaGrid g{std::vector<double>(points), std::vector<double>(points),
              kPi / std::ldexp(1.0, m + 1)};
  for (std::size_t l = 0; l < points; ++l) {
    const double theta = static_cast<double>(l) * g.step;
    g.cos[l] = std::cos(theta);
    g.sin[l] = std::sin(theta);
  }
  constexpr double exact_cos[] = {1.0, 0.0, -1.0, 0.0, 1.0};
  constexpr double exact_sin[] = {0.0, 1.0, 0.0, -1.0, 0.0};
  for (std::size_t q = 0; q < 5; ++q) {
    g.cos[q * quarter] = exact_cos[q];
    g.sin[q * quarter] = exact_sin[q];
  }
  return g;
}

}  // namespace

ComplexPair::ComplexPair(LatticeElement re, LatticeElement im)
    : re_(std::move(re)), im_(std::move(im)) {
  if (re_.is_complex() || im_.is_complex()) {
    throw InvalidArgument("complex pair parts must be real elements");
  }
  require_same_carrier(re_, im_);
}

ComplexPair ComplexPair::from(const LatticeElement& z) {
  return {z.real_part(), z.is_complex() ? z.imag_part() : LatticeElement::zero(z.backend())};
}

LatticeElement ComplexPair::combined() const {
  std::vector<double> re(re_.re().begin(), re_.re().end());
  std::vector<double> im(im_.re().begin(), im_.re().end());
  return {re_.backend().with_field(Field::complex), std::move(re), std::move(im)};
}

ComplexPair ComplexPair::conjugate() const { return {re_, -im_}; }

ComplexPair ComplexPair::times_i() const { return {-im_, re_}; }

std::vector<double> theta_grid_sup(std::span<const double> a, std::span<const double> b, int m) {
  require_depth(m);
  if (a.size() != b.size()) throw InvalidArgument("theta sup needs parts of equal length");
  const auto grid = theta_grid(m);
  std::vector<double> out(a.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = out[i];
    for (std::size_t l = 0; l < grid.cos.size(); ++l) {
      best = std::max(best, a[i] * grid.cos[l] + b[i] * grid.sin[l]);
    }
    out[i] = best;
  }
  return out;
}

ThetaModulusCertificate complex_modulus_theta(const ComplexPair& z, int m) {
  require_depth(m);
  const auto& backend = z.re().backend();
  auto approx = theta_grid_sup(z.re().re(), z.im().re(), m);
  std::vector<double> bound(z.re().size());
  const double scale = kPi / std::ldexp(1.0, m);
  for (std::size_t i = 0; i < bound.size(); ++i) {
    bound[i] = scale * (std::abs(z.re().re()[i]) + std::abs(z.im().re()[i]));
  }
  return {m, LatticeElement(backend, std::move(approx)), LatticeElement(backend, std::move(bound)),
          kPi / std::ldexp(1.0, m + 1)};
}

LatticeElement complex_modulus_exact(const ComplexPair& z) {
  std::vector<double> out(z.re().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(z.re().re()[i], z.im().re()[i]);
  return {z.re().backend(), std::move(out)};
}

MultilinearMap complexify_multilinear(const MultilinearMap& map) {
  if (map.field() != Field::real) {
    throw InvalidArgument("complexification expects a map over real lattices");
  }
  return map.as_field(Field::complex);
}

LatticeElement apply_complexified(const MultilinearMap& map, std::span<const ComplexPair> args) {
  if (map.field() != Field::real) {
    throw InvalidArgument("complexification expects a map over real lattices");
  }
  const std::size_t s = map.arity();
  if (args.size() != s) {
    throw InvalidArgument("arity mismatch: map takes " + std::to_string(s) + " arguments, got " +
                          std::to_string(args.size()));
  }
  const std::size_t n = map.codomain_dim();
  std::vector<double> re(n, 0.0);
  std::vector<double> im(n, 0.0);
  std::vector<LatticeElement> slot;
  slot.reserve(s);
  for (std::size_t eps = 0; eps < (std::size_t{1} << s); ++eps) {
    slot.clear();
    std::size_t ones = 0;
    for (std::size_t k = 0; k < s; ++k) {
      const bool imaginary = (eps >> k) & 1U;
      ones += imaginary;
      slot.push_back(imaginary ? args[k].im() : args[k].re());
    }
    const auto value = latticekit::apply(map, slot);
    // i^ones cycles through 1, i, -1, -i.
    const double sign = (ones % 4 < 2) ? 1.0 : -1.0;
    auto& target = (ones % 2 == 0) ? re : im;
    for (std::size_t j = 0; j < n; ++j) target[j] += sign * value.re()[j];
  }
  return {Backend::coordinate(n, Field::complex), std::move(re), std::move(im)};
}

DeSchipperCertificate de_schipper_check(const MultilinearMap& matrix, int m) {
  require_depth(m);
  if (matrix.arity() != 1) throw InvalidArgument("de_schipper_check expects a matrix (s = 1)");
  DeSchipperCertificate cert;
  cert.rows = matrix.codomain_dim();
  cert.cols = matrix.domain_dims().front();
  cert.depth = m;

  const auto coeffs = matrix.coefficients();
  std::vector<double> a(coeffs.size());
  std::vector<double> b(coeffs.size());
  cert.magnitude.resize(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    a[k] = coeffs[k].real();
    b[k] = coeffs[k].imag();
    cert.magnitude[k] = std::abs(coeffs[k]);
  }
  // Re(e^{-i theta} (a + i b)) = a cos(theta) + b sin(theta)
  cert.theta_sup = theta_grid_sup(a, b, m);

  const double scale = kPi / std::ldexp(1.0, m);
  cert.gap_bound.resize(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    cert.gap_bound[k] = scale * cert.magnitude[k];
    const double gap = cert.magnitude[k] - cert.theta_sup[k];
    // A few rounding units of slack on the upper side.
    const double slack = 4 * std::numeric_limits<double>::epsilon() * cert.magnitude[k];
    if (gap < -slack) cert.below = false;
    if (gap > cert.gap_bound[k]) cert.within_bound = false;
    cert.max_gap = std::max(cert.max_gap, gap);
    cert.total_gap += gap;
  }
  return cert;
}

}  // namespace latticekit
