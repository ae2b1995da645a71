#include "latticekit/opvar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace latticekit {

namespace {

constexpr double kReconstructionTolerance = 1e-12;
constexpr double kEvaluationTolerance = 1e-10;

void require_positive_coordinate(const LatticeElement& a, const char* what) {
  if (a.backend().kind() != Backend::Kind::coordinate || a.is_complex()) {
    throw InvalidArgument(std::string(what) + " must be a real coordinate element");
  }
  if (!is_positive(a)) throw InvalidArgument(std::string(what) + " has a negative coordinate");
}

LatticeElement uniform_element(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return LatticeElement::real(std::move(v));
}

std::vector<LatticeElement> random_arguments(const MultilinearMap& map, std::mt19937_64& rng) {
  std::vector<LatticeElement> args;
  for (auto n : map.domain_dims()) args.push_back(uniform_element(n, -1.0, 1.0, rng));
  return args;
}

// |T|(|f_1|, ..., |f_s|), the natural scale for evaluation residuals.
double evaluation_scale(const MultilinearMap& map, std::span<const LatticeElement> args) {
  std::vector<LatticeElement> mods;
  for (const auto& f : args) mods.push_back(modulus(f));
  return latticekit::apply(map.entrywise_modulus(), mods).norm_inf();
}

double relative(double residual, double scale) {
  return scale > 0.0 ? residual / scale : residual;
}

std::vector<LatticeElement> atoms_at(const MultilinearMap& map, std::span<const std::size_t> idx) {
  std::vector<LatticeElement> args;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    args.push_back(LatticeElement::atom(Backend::coordinate(map.domain_dims()[k]), idx[k]));
  }
  return args;
}

std::string index_text(std::size_t j, std::span<const std::size_t> idx) {
  std::string out = "t[" + std::to_string(j) + ";";
  for (std::size_t k = 0; k < idx.size(); ++k) out += (k ? "," : "") + std::to_string(idx[k]);
  return out + "]";
}

}  // namespace

// Partitions ---------------------------------------------------------------------

Partition::Partition(LatticeElement target, std::vector<LatticeElement> pieces)
    : target_(std::move(target)), pieces_(std::move(pieces)) {
  require_positive_coordinate(target_, "partition target");
  std::vector<double> total(target_.size(), 0.0);
  for (const auto& piece : pieces_) {
    require_same_carrier(piece, target_);
    require_positive_coordinate(piece, "partition piece");
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += piece.re()[i];
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < total.size(); ++i) {
    gap = std::max(gap, std::abs(total[i] - target_.re()[i]));
  }
  if (gap > kReconstructionTolerance * target_.norm_inf()) {
    throw InvalidArgument("partition pieces do not sum to the target");
  }
}

Partition atomic_partition(const LatticeElement& a) {
  require_positive_coordinate(a, "partition target");
  std::vector<LatticeElement> pieces;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.re()[i] > 0.0) pieces.push_back(a.re()[i] * LatticeElement::atom(a.backend(), i));
  }
  return {a, std::move(pieces)};
}

Partition random_partition(const LatticeElement& a, std::mt19937_64& rng, int max_depth) {
  require_positive_coordinate(a, "partition target");
  std::bernoulli_distribution split(0.5);
  std::uniform_real_distribution<double> fraction(0.0, 1.0);
  std::vector<LatticeElement> pieces;
  std::function<void(const std::vector<double>&, int)> grow = [&](const std::vector<double>& p,
                                                                   int depth) {
    if (depth >= max_depth || !split(rng)) {
      pieces.emplace_back(a.backend(), p);
      return;
    }
    std::vector<double> left(p.size());
    std::vector<double> right(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      left[i] = fraction(rng) * p[i];
      right[i] = p[i] - left[i];
    }
    grow(left, depth + 1);
    grow(right, depth + 1);
  };
  grow(std::vector<double>(a.re().begin(), a.re().end()), 0);
  return {a, std::move(pieces)};
}

LatticeElement partition_sum(const MultilinearMap& map, std::span<const Partition> partitions) {
  if (partitions.size() != map.arity()) {
    throw InvalidArgument("arity mismatch: map takes " + std::to_string(map.arity()) +
                          " partitions, got " + std::to_string(partitions.size()));
  }
  for (std::size_t k = 0; k < partitions.size(); ++k) {
    if (partitions[k].target().size() != map.domain_dims()[k]) {
      throw InvalidArgument("dimension mismatch in partition " + std::to_string(k + 1));
    }
  }

  // Contract the trailing slot against every piece, keeping one partial
  // buffer per tuple of pieces chosen so far.
  std::vector<std::vector<Complex>> partial{
      std::vector<Complex>(map.coefficients().begin(), map.coefficients().end())};
  for (std::size_t k = map.arity(); k-- > 0;) {
    const std::size_t n = map.domain_dims()[k];
    std::vector<std::vector<Complex>> next;
    next.reserve(partial.size() * partitions[k].pieces().size());
    for (const auto& buffer : partial) {
      for (const auto& piece : partitions[k].pieces()) {
        std::vector<Complex> reduced(buffer.size() / n);
        for (std::size_t r = 0; r < reduced.size(); ++r) {
          Complex acc = 0.0;
          for (std::size_t i = 0; i < n; ++i) acc += buffer[r * n + i] * piece.re()[i];
          reduced[r] = acc;
        }
        next.push_back(std::move(reduced));
      }
    }
    partial = std::move(next);
  }

  std::vector<double> total(map.codomain_dim(), 0.0);
  for (const auto& value : partial) {
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += std::abs(value[j]);
  }
  return LatticeElement::real(std::move(total));
}

std::string to_string(VariationStrategy strategy) {
  return strategy == VariationStrategy::atomic ? "atomic" : "random-refinement";
}

VariationStrategy strategy_from_string(const std::string& name) {
  if (name == "atomic") return VariationStrategy::atomic;
  if (name == "random-refinement") return VariationStrategy::random_refinement;
  throw InvalidArgument("unknown variation strategy '" + name + "'");
}

VariationResult variation_modulus(const MultilinearMap& map, std::span<const LatticeElement> targets,
                                  VariationStrategy strategy, std::size_t budget,
                                  std::uint64_t seed) {
  if (budget == 0) throw InvalidArgument("budget must be >= 1");
  if (targets.size() != map.arity()) {
    throw InvalidArgument("arity mismatch: map takes " + std::to_string(map.arity()) +
                          " targets, got " + std::to_string(targets.size()));
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    require_positive_coordinate(targets[k], "variation target");
    if (targets[k].size() != map.domain_dims()[k]) {
      throw InvalidArgument("dimension mismatch in target " + std::to_string(k + 1));
    }
  }

  if (strategy == VariationStrategy::atomic) {
    std::vector<Partition> parts;
    for (const auto& a : targets) parts.push_back(atomic_partition(a));
    return {partition_sum(map, parts), strategy, 1};
  }

  std::mt19937_64 rng(seed);
  std::vector<double> best(map.codomain_dim(), 0.0);
  std::vector<Partition> parts;
  for (std::size_t b = 0; b < budget; ++b) {
    parts.clear();
    for (const auto& a : targets) parts.push_back(random_partition(a, rng));
    const auto sum = partition_sum(map, parts);
    for (std::size_t j = 0; j < best.size(); ++j) best[j] = std::max(best[j], sum.re()[j]);
  }
  return {LatticeElement::real(std::move(best)), strategy, budget};
}

// Orthosymmetry and s-morphisms -----------------------------------------------------

Certificate is_orthosymmetric(const MultilinearMap& map, std::size_t sample_count,
                              std::uint64_t seed) {
  const std::size_t s = map.arity();
  if (s < 2) throw InvalidArgument("orthosymmetry needs arity s >= 2");
  const auto& dims = map.domain_dims();
  if (std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end()) {
    throw InvalidArgument("orthosymmetry needs equal domain dimensions");
  }
  const std::size_t n = dims.front();

  Certificate cert;
  for (std::size_t j = 0; j < map.codomain_dim() && cert.structural; ++j) {
    for (std::size_t input = 0; input < map.input_count(); ++input) {
      const Complex t = map.coefficient_flat(j, input);
      if (t == 0.0) continue;
      const auto idx = map.unflatten(input);
      if (std::adjacent_find(idx.begin(), idx.end(), std::not_equal_to<>()) == idx.end()) continue;
      cert.structural = false;
      cert.witness = atoms_at(map, idx);
      cert.detail = index_text(j, idx) + " is a non-zero off-diagonal coefficient";
      break;
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_slot(0, s - 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t sample = 0; sample < sample_count; ++sample) {
    auto args = random_arguments(map, rng);
    const std::size_t a = pick_slot(rng);
    std::size_t b = pick_slot(rng);
    while (b == a) b = pick_slot(rng);
    // Split the coordinates: slot a lives on `side`, slot b on its complement.
    std::vector<bool> side(n);
    for (std::size_t i = 0; i < n; ++i) side[i] = coin(rng);
    std::vector<double> fa(args[a].re().begin(), args[a].re().end());
    std::vector<double> fb(args[b].re().begin(), args[b].re().end());
    for (std::size_t i = 0; i < n; ++i) (side[i] ? fb[i] : fa[i]) = 0.0;
    args[a] = LatticeElement::real(std::move(fa));
    args[b] = LatticeElement::real(std::move(fb));

    const auto value = latticekit::apply(map, args);
    const double residual = relative(value.norm_inf(), evaluation_scale(map, args));
    cert.max_residual = std::max(cert.max_residual, residual);
    ++cert.samples;
    if (residual > kEvaluationTolerance && cert.sampled) {
      cert.sampled = false;
      if (cert.structural) {
        cert.witness = args;
        cert.detail = "disjoint arguments in slots " + std::to_string(a + 1) + " and " +
                      std::to_string(b + 1) + " give a non-zero value";
      }
    }
  }
  cert.holds = cert.structural && cert.sampled;
  if (cert.holds) cert.detail = "all off-diagonal coefficients vanish";
  return cert;
}

Certificate is_s_morphism(const MultilinearMap& map, std::size_t sample_count, std::uint64_t seed) {
  if (map.field() != Field::real) throw InvalidArgument("s-morphism check needs a real map");
  const std::size_t s = map.arity();
  Certificate cert;

  auto ones_except = [&](std::size_t slot, LatticeElement f) {
    std::vector<LatticeElement> args;
    for (std::size_t k = 0; k < s; ++k) {
      args.push_back(k == slot ? f : LatticeElement::real(std::vector<double>(map.domain_dims()[k], 1.0)));
    }
    return args;
  };

  // Structural rule: non-negative coefficients, and for every output j and
  // slot k a single index i_k carries all non-zero coefficients.
  for (std::size_t j = 0; j < map.codomain_dim() && cert.structural; ++j) {
    std::vector<std::optional<std::size_t>> used(s);
    for (std::size_t input = 0; input < map.input_count() && cert.structural; ++input) {
      const double t = map.coefficient_flat(j, input).real();
      if (t == 0.0) continue;
      const auto idx = map.unflatten(input);
      if (t < 0.0) {
        cert.structural = false;
        auto args = atoms_at(map, idx);
        args[0] = -args[0];
        cert.witness = std::move(args);
        cert.detail = index_text(j, idx) + " is negative";
        break;
      }
      for (std::size_t k = 0; k < s; ++k) {
        if (!used[k]) {
          used[k] = idx[k];
          continue;
        }
        if (*used[k] == idx[k]) continue;
        // Two indices p, q feed output j through slot k: with the other slots
        // at 1, f = A_q e_p - A_p e_q cancels at j while |f| does not.
        const std::size_t p = *used[k];
        const std::size_t q = idx[k];
        const Backend slot_backend = Backend::coordinate(map.domain_dims()[k]);
        const auto ap = latticekit::apply(map, ones_except(k, LatticeElement::atom(slot_backend, p)));
        const auto aq = latticekit::apply(map, ones_except(k, LatticeElement::atom(slot_backend, q)));
        const auto f = aq.re()[j] * LatticeElement::atom(slot_backend, p) -
                       ap.re()[j] * LatticeElement::atom(slot_backend, q);
        cert.structural = false;
        cert.witness = ones_except(k, f);
        cert.detail = "output " + std::to_string(j) + " depends on indices " + std::to_string(p) +
                      " and " + std::to_string(q) + " of slot " + std::to_string(k + 1);
        break;
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_slot(0, s - 1);
  for (std::size_t sample = 0; sample < sample_count; ++sample) {
    const std::size_t k = pick_slot(rng);
    std::vector<LatticeElement> args;
    for (std::size_t slot = 0; slot < s; ++slot) {
      const double lo = slot == k ? -1.0 : 0.1;
      args.push_back(uniform_element(map.domain_dims()[slot], lo, 1.0, rng));
    }
    auto mod_args = args;
    mod_args[k] = modulus(args[k]);
    const auto lhs = latticekit::apply(map, mod_args);
    const auto rhs = modulus(latticekit::apply(map, args));
    const double residual = relative(distance_inf(lhs, rhs), evaluation_scale(map, args));
    cert.max_residual = std::max(cert.max_residual, residual);
    ++cert.samples;
    if (residual > kEvaluationTolerance && cert.sampled) {
      cert.sampled = false;
      if (cert.structural) {
        cert.witness = args;
        cert.detail = "slot " + std::to_string(k + 1) + " does not preserve the modulus";
      }
    }
  }
  cert.holds = cert.structural && cert.sampled;
  if (cert.holds) cert.detail = "each slot is a lattice homomorphism";
  return cert;
}

// Powers and factorizations -------------------------------------------------------

LatticeElement SPower::apply(std::span<const LatticeElement> args) const {
  return latticekit::apply(power_map, args);
}

SPower s_power(std::size_t n, std::size_t s) {
  if (n < 1) throw InvalidArgument("s-power needs n >= 1");
  if (s < 2) throw InvalidArgument("s-power needs s >= 2");
  std::size_t tensor_dim = 1;
  for (std::size_t k = 0; k < s; ++k) tensor_dim *= n;

  const auto product = MultilinearMap::coordinatewise_product(n, s);
  std::vector<std::size_t> diagonal(n);
  std::vector<std::size_t> ideal;
  for (std::size_t flat = 0; flat < tensor_dim; ++flat) {
    const auto idx = product.unflatten(flat);
    if (std::adjacent_find(idx.begin(), idx.end(), std::not_equal_to<>()) == idx.end()) {
      diagonal[idx.front()] = flat;
    } else {
      ideal.push_back(flat);
    }
  }
  std::vector<double> q(n * tensor_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i * tensor_dim + diagonal[i]] = 1.0;

  return SPower{n,           s, tensor_dim, std::move(ideal), std::move(diagonal),
                MultilinearMap::matrix(n, tensor_dim, std::move(q)), product};
}

Factorization factor_through_power(const MultilinearMap& map, const SPower& power,
                                   std::size_t sample_count, std::uint64_t seed) {
  if (map.arity() != power.s) {
    throw InvalidArgument("arity mismatch: power has s = " + std::to_string(power.s) +
                          ", map has " + std::to_string(map.arity()));
  }
  for (auto d : map.domain_dims()) {
    if (d != power.n) throw InvalidArgument("dimension mismatch: power has n = " + std::to_string(power.n));
  }
  const auto ortho = is_orthosymmetric(map, sample_count, seed);
  if (!ortho.holds) {
    throw FactorizationError("factorization impossible, map is not orthosymmetric: " + ortho.detail,
                             ortho.witness.value_or(std::vector<LatticeElement>{}));
  }
  const auto morphism = is_s_morphism(map, sample_count, seed + 1);
  if (!morphism.holds) {
    throw FactorizationError("map is not an s-morphism: " + morphism.detail,
                             morphism.witness.value_or(std::vector<LatticeElement>{}));
  }

  const std::size_t n = power.n;
  const std::size_t out = map.codomain_dim();
  std::vector<double> entries(out * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::size_t> diag(power.s, i);
    const auto column = latticekit::apply(map, atoms_at(map, diag));
    for (std::size_t j = 0; j < out; ++j) entries[j * n + i] = column.re()[j];
  }
  Factorization result{MultilinearMap::matrix(out, n, std::move(entries)), 0.0, 0,
                       map.is_positive(), false};
  result.linear_positive = result.linear.is_positive();

  std::mt19937_64 rng(seed + 2);
  for (std::size_t sample = 0; sample < sample_count; ++sample) {
    const auto args = random_arguments(map, rng);
    const auto direct = latticekit::apply(map, args);
    const auto through = latticekit::apply(result.linear, {power.apply(args)});
    result.residual = std::max(result.residual, relative(distance_inf(direct, through),
                                                         evaluation_scale(map, args)));
    ++result.samples;
  }
  return result;
}

Factorization factor_through_tensor(const MultilinearMap& map, std::size_t sample_count,
                                    std::uint64_t seed) {
  const std::size_t total = map.input_count();
  const std::size_t out = map.codomain_dim();
  std::vector<Complex> entries(out * total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto column = latticekit::apply(map, atoms_at(map, map.unflatten(flat)));
    for (std::size_t j = 0; j < out; ++j) entries[j * total + flat] = column[j];
  }
  Factorization result{MultilinearMap({total}, out, std::move(entries), map.field()), 0.0, 0,
                       map.is_positive(), false};
  result.linear_positive = result.linear.is_positive();

  std::mt19937_64 rng(seed);
  for (std::size_t sample = 0; sample < sample_count; ++sample) {
    const auto args = random_arguments(map, rng);
    const auto direct = latticekit::apply(map, args);
    const auto through = latticekit::apply(result.linear, {tensor_embed(args)});
    result.residual = std::max(result.residual, relative(distance_inf(direct, through),
                                                         evaluation_scale(map, args)));
    ++result.samples;
  }
  return result;
}

MultilinearMap unflatten_linear(const MultilinearMap& linear, std::vector<std::size_t> domain_dims) {
  if (linear.arity() != 1) throw InvalidArgument("expected a linear map (s = 1)");
  const std::size_t total = std::accumulate(domain_dims.begin(), domain_dims.end(), std::size_t{1},
                                            std::multiplies<>());
  if (total != linear.domain_dims().front()) {
    throw InvalidArgument("dimension mismatch: tensor lattice has dimension " +
                          std::to_string(linear.domain_dims().front()));
  }
  const auto c = linear.coefficients();
  return {std::move(domain_dims), linear.codomain_dim(), std::vector<Complex>(c.begin(), c.end()),
          linear.field()};
}

MultilinearMap random_map(const std::vector<std::size_t>& domain_dims, std::size_t codomain_dim,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::size_t count = codomain_dim;
  for (auto d : domain_dims) count *= d;
  std::vector<double> c(count);
  for (auto& x : c) x = dist(rng);
  return MultilinearMap::real(domain_dims, codomain_dim, std::move(c));
}

LbvCertificate check_lbv_isomorphism(const std::vector<std::size_t>& domain_dims,
                                     std::size_t codomain_dim, std::size_t sample_count,
                                     std::uint64_t seed) {
  if (domain_dims.empty()) throw InvalidArgument("need at least one domain dimension");
  LbvCertificate cert;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scalar(-2.0, 2.0);
  auto lift = [](const MultilinearMap& t) { return factor_through_tensor(t, 0).linear; };

  for (std::size_t sample = 0; sample < sample_count; ++sample) {
    const auto t1 = random_map(domain_dims, codomain_dim, rng);
    const auto t2 = random_map(domain_dims, codomain_dim, rng);
    const double alpha = scalar(rng);
    const auto l1 = lift(t1);
    const auto l2 = lift(t2);

    const auto combined = lift(Complex(alpha) * t1 + t2);
    const double linearity = coefficient_distance(combined, Complex(alpha) * l1 + l2) /
                             std::max(1.0, combined.max_abs());
    if (linearity > kEvaluationTolerance) cert.linear = false;

    if (l1.coefficients().size() != t1.coefficients().size() ||
        coefficient_distance(unflatten_linear(l1, domain_dims), t1) != 0.0) {
      cert.bijective = false;
    }

    if (!lift(t1.entrywise_modulus()).is_positive() ||
        !unflatten_linear(l2.entrywise_modulus(), domain_dims).is_positive()) {
      cert.positive_both_ways = false;
    }

    std::vector<LatticeElement> targets;
    for (auto n : domain_dims) targets.push_back(uniform_element(n, 0.0, 1.0, rng));
    const auto variation = variation_modulus(t1, targets).value;
    const auto image = latticekit::apply(l1.entrywise_modulus(), {tensor_embed(targets)});
    const double modulus_gap = relative(distance_inf(variation, image), image.norm_inf());
    if (modulus_gap > kEvaluationTolerance) cert.modulus_correspondence = false;

    cert.max_residual = std::max({cert.max_residual, linearity, modulus_gap});
    ++cert.samples;
  }
  return cert;
}

}  // namespace latticekit
