#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "latticekit/core.hpp"
#include "latticekit/multilinear.hpp"

namespace latticekit {

/// re + i im with both parts on one real backend.
class ComplexPair {
 public:
  ComplexPair(LatticeElement re, LatticeElement im);
  /// Splits a complex (or real) element into its parts.
  static ComplexPair from(const LatticeElement& z);

  const LatticeElement& re() const noexcept { return re_; }
  const LatticeElement& im() const noexcept { return im_; }
  LatticeElement combined() const;
  ComplexPair conjugate() const;
  /// i * z = -im + i re
  ComplexPair times_i() const;

 private:
  LatticeElement re_;
  LatticeElement im_;
};

struct ThetaModulusCertificate {
  int depth = 0;
  LatticeElement approximant;
  /// (pi / 2^m) * (|re| + |im|)
  LatticeElement error_bound;
  double grid_spacing = 0.0;
};

/// Join of re cos(theta) + im sin(theta) over theta_l = l pi / 2^(m+1) on [0, 2 pi].
ThetaModulusCertificate complex_modulus_theta(const ComplexPair& z, int m);

/// sqrt(re^2 + im^2), coordinatewise.
LatticeElement complex_modulus_exact(const ComplexPair& z);

/// max over the theta grid of a cos(theta) + b sin(theta), per coordinate.
std::vector<double> theta_grid_sup(std::span<const double> a, std::span<const double> b, int m);

/// T_C: the same coefficients read over the complex field.
MultilinearMap complexify_multilinear(const MultilinearMap& map);

/// T_C(f^1, ..., f^s) by the expansion
///   sum over eps in {0,1}^s of T(f^1_eps1, ..., f^s_epss) * i^(eps1 + ... + epss),
/// evaluating the real map only on real parts.
LatticeElement apply_complexified(const MultilinearMap& map, std::span<const ComplexPair> args);

struct DeSchipperCertificate {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int depth = 0;
  /// Row-major |t_jk|.
  std::vector<double> magnitude;
  /// Row-major max over the theta grid of Re(e^{-i theta} t_jk).
  std::vector<double> theta_sup;
  /// Row-major (pi / 2^m) |t_jk|.
  std::vector<double> gap_bound;
  bool below = true;
  bool within_bound = true;
  double max_gap = 0.0;
  double total_gap = 0.0;

  bool holds() const { return below && within_bound; }
};

/// Entrywise magnitude of a complex matrix against the theta-grid supremum of
/// its rotated real parts. The matrix is an s = 1 map.
DeSchipperCertificate de_schipper_check(const MultilinearMap& matrix, int m);

}  // namespace latticekit
