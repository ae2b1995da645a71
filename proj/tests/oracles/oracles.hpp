#pragma once

// Independent reference computations used by the tests. None of these call
// into the library; they recompute quantities the slow, obvious way.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

struct Factor {
  bool is_cos;
  std::size_t angle;
};

struct ScalarTerm {
  double u;
  std::vector<Factor> factors;
};

/// Exhaustive join of sum_k u_k prod t(theta) over the grid l pi / 2^(m+1),
/// l = 0..2^m, one index per angle variable. No shortcuts.
inline double brute_sigma(const std::vector<ScalarTerm>& terms, int m) {
  std::size_t angles = 0;
  for (const auto& t : terms) {
    for (const auto& f : t.factors) angles = std::max(angles, f.angle + 1);
  }
  const std::size_t points = (std::size_t{1} << m) + 1;
  std::size_t total = 1;
  for (std::size_t a = 0; a < angles; ++a) total *= points;
  const double step = std::numbers::pi / std::ldexp(1.0, m + 1);
  double best = -INFINITY;
  std::vector<std::size_t> idx(angles, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rest = t;
    for (std::size_t a = 0; a < angles; ++a) {
      idx[a] = rest % points;
      rest /= points;
    }
    double value = 0.0;
    for (const auto& term : terms) {
      double w = term.u;
      for (const auto& f : term.factors) {
        const double theta = static_cast<double>(idx[f.angle]) * step;
        w *= f.is_cos ? std::cos(theta) : std::sin(theta);
      }
      value += w;
    }
    best = std::max(best, value);
  }
  return best;
}

/// sup of a cos + b sin over [0, pi/2].
inline double quarter_sup(double a, double b) {
  if (a >= 0.0 && b >= 0.0) return std::sqrt(a * a + b * b);
  return std::max(a, b);
}

/// Dense sampling of a cos + b sin over [0, 2 pi] with `points` samples.
inline double dense_theta_sup(double a, double b, std::size_t points) {
  double best = -INFINITY;
  for (std::size_t l = 0; l < points; ++l) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(points);
    best = std::max(best, a * std::cos(theta) + b * std::sin(theta));
  }
  return best;
}

/// Determinant by permutation expansion in long double.
inline long double leibniz_det(const std::vector<std::vector<long double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long double total = 0.0L;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    long double prod = 1.0L;
    for (std::size_t i = 0; i < n; ++i) prod *= a[i][perm[i]];
    total += (inversions % 2 ? -prod : prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// det of B_ij = 1 / (x^2 + alpha_j^2)^(i-1), by permutation expansion.
inline long double vandermonde_det(double x, const std::vector<double>& alphas) {
  const std::size_t n = alphas.size();
  std::vector<std::vector<long double>> b(n, std::vector<long double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const long double node = 1.0L / ((long double)x * x + (long double)alphas[j] * alphas[j]);
    long double p = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
      b[i][j] = p;
      p *= node;
    }
  }
  return leibniz_det(b);
}

/// Dense multilinear map in (j, i_1, ..., i_s) layout, i_s fastest.
struct Map {
  std::vector<std::size_t> dims;
  std::size_t codim;
  std::vector<Complex> t;

  std::size_t inputs() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

/// Sum over every index tuple, one term at a time.
inline std::vector<Complex> naive_apply(const Map& map, const std::vector<std::vector<double>>& args) {
  const std::size_t inputs = map.inputs();
  std::vector<Complex> out(map.codim, 0.0);
  std::vector<std::size_t> idx(map.dims.size());
  for (std::size_t j = 0; j < map.codim; ++j) {
    for (std::size_t flat = 0; flat < inputs; ++flat) {
      std::size_t rest = flat;
      for (std::size_t k = map.dims.size(); k-- > 0;) {
        idx[k] = rest % map.dims[k];
        rest /= map.dims[k];
      }
      Complex term = map.t[j * inputs + flat];
      for (std::size_t k = 0; k < idx.size(); ++k) term *= args[k][idx[k]];
      out[j] += term;
    }
  }
  return out;
}

/// |t| applied to the targets: the coordinate-lattice value of the partition supremum.
inline std::vector<double> entrywise_modulus_apply(const Map& map,
                                                   const std::vector<std::vector<double>>& targets) {
  Map abs_map = map;
  for (auto& c : abs_map.t) c = std::abs(c);
  const auto v = naive_apply(abs_map, targets);
  std::vector<double> out;
  for (const auto& c : v) out.push_back(c.real());
  return out;
}

/// Random partition by halving pieces with random coordinate fractions.
inline std::vector<std::vector<double>> random_partition(const std::vector<double>& a,
                                                         std::mt19937_64& rng, int splits) {
  std::vector<std::vector<double>> pieces{a};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < splits; ++s) {
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    auto& p = pieces[pick(rng)];
    std::vector<double> left(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      left[i] = u(rng) * p[i];
      p[i] -= left[i];
    }
    pieces.push_back(left);
  }
  return pieces;
}

/// sum over piece tuples of |T(x^1, ..., x^s)|, each tuple evaluated naively.
inline std::vector<double> partition_sum(const Map& map,
                                         const std::vector<std::vector<std::vector<double>>>& parts) {
  std::vector<double> total(map.codim, 0.0);
  std::vector<std::size_t> choice(parts.size(), 0);
  while (true) {
    std::vector<std::vector<double>> args;
    for (std::size_t k = 0; k < parts.size(); ++k) args.push_back(parts[k][choice[k]]);
    const auto v = naive_apply(map, args);
    for (std::size_t j = 0; j < map.codim; ++j) total[j] += std::abs(v[j]);
    std::size_t k = 0;
    for (; k < parts.size(); ++k) {
      if (++choice[k] < parts[k].size()) break;
      choice[k] = 0;
    }
    if (k == parts.size()) break;
  }
  return total;
}

}  // namespace oracle
