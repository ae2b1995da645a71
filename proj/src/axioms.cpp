#include "latticekit/axioms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace latticekit {

namespace {

LatticeElement random_element(const Backend& backend, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::vector<double> re(backend.dimension());
  for (double& v : re) v = dist(rng);
  if (backend.field() == Field::real) return {backend, std::move(re)};
  std::vector<double> im(backend.dimension());
  for (double& v : im) v = dist(rng);
  return {backend, std::move(re), std::move(im)};
}

Scalar random_scalar(Field field, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  if (field == Field::real) return dist(rng);
  return Scalar(dist(rng), dist(rng));
}

// Basis over the ground field: the atoms of the backend.
std::vector<LatticeElement> basis(const Backend& backend) {
  std::vector<LatticeElement> out;
  out.reserve(backend.dimension());
  for (std::size_t i = 0; i < backend.dimension(); ++i) {
    auto e = LatticeElement::atom(backend, i);
    out.push_back(backend.field() == Field::complex ? e.as_complex() : e);
  }
  return out;
}

AxiomReport report_for(AxiomId id) {
  AxiomReport report;
  report.axiom = id;
  return report;
}

struct Accumulator {
  AxiomReport report;
  const Tolerance& tol;

  void record(const Residual& r, Witness witness) {
    ++report.samples;
    report.max_residual = std::max(report.max_residual, r.value);
    if (report.verdict == Verdict::pass && !tol.within(r.value, r.scale)) {
      report.verdict = Verdict::fail;
      report.witness = std::move(witness);
    }
  }
};

std::size_t spanning_rank(const ModulusMap& m, const std::vector<LatticeElement>& elements) {
  if (elements.empty()) return 0;
  const std::size_t n = elements.front().size();
  Eigen::MatrixXcd images(n, elements.size());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto image = m(elements[k]);
    for (std::size_t i = 0; i < n; ++i) images(i, k) = image[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(images);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace

std::string to_string(AxiomId id) {
  switch (id) {
    case AxiomId::idempotency: return "idempotency";
    case AxiomId::m1_homogeneity: return "M1-homogeneity";
    case AxiomId::m2_identity: return "M2-identity";
    case AxiomId::m3_spanning: return "M3-spanning";
    case AxiomId::archimedean: return "archimedean";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) { return verdict == Verdict::pass ? "pass" : "fail"; }

AxiomId axiom_from_string(const std::string& name) {
  for (auto id : {AxiomId::idempotency, AxiomId::m1_homogeneity, AxiomId::m2_identity,
                  AxiomId::m3_spanning, AxiomId::archimedean}) {
    if (to_string(id) == name) return id;
  }
  throw InvalidArgument("unknown axiom id '" + name + "'");
}

ModulusMap builtin_modulus() {
  return [](const LatticeElement& f) { return modulus(f); };
}

Residual axiom_residual(AxiomId axiom, const ModulusMap& m, const Witness& w) {
  switch (axiom) {
    case AxiomId::idempotency: {
      const auto& f = w.elements.at(0);
      const auto mf = m(f);
      return {distance_inf(m(mf), mf), mf.norm_inf()};
    }
    case AxiomId::m1_homogeneity: {
      const auto& f = w.elements.at(0);
      const auto& alpha = w.scalars.at(0);
      const auto lhs = m(alpha * f);
      const auto rhs = alpha.magnitude() * m(f);
      return {distance_inf(lhs, rhs), std::max(lhs.norm_inf(), rhs.norm_inf())};
    }
    case AxiomId::m2_identity: {
      const auto& f = w.elements.at(0);
      const auto& g = w.elements.at(1);
      const auto mf = m(f);
      const auto mg = m(g);
      const auto mfg = m(f + g);
      const auto lhs = m(m(mf + mg) - mfg);
      const auto rhs = mf + mg - mfg;
      return {distance_inf(lhs, rhs), f.norm_inf() + g.norm_inf()};
    }
    case AxiomId::m3_spanning: {
      const std::size_t n = w.elements.empty() ? 0 : w.elements.front().size();
      const std::size_t rank = spanning_rank(m, w.elements);
      return {static_cast<double>(n - rank), 0.0};
    }
    case AxiomId::archimedean: {
      const auto& f = w.elements.at(0);
      const auto& g = w.elements.at(1);
      const auto depth = static_cast<std::size_t>(w.scalars.at(0).re());
      const auto mf = m(f);
      const auto mg = m(g);
      for (std::size_t n = 1; n <= depth; ++n) {
        const auto h = mg - static_cast<double>(n) * mf;
        const auto mh = m(h);
        if (!Tolerance{}.within(distance_inf(mh, h), mg.norm_inf() + n * mf.norm_inf())) {
          return {0.0, f.norm_inf()};
        }
      }
      return {f.norm_inf(), 0.0};
    }
  }
  return {};
}

std::vector<AxiomReport> check_modulus_axioms(const ModulusMap& m, const Backend& backend,
                                              std::size_t sample_count, const Tolerance& tol,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto atoms = basis(backend);

  Accumulator idem{report_for(AxiomId::idempotency), tol};
  Accumulator m1{report_for(AxiomId::m1_homogeneity), tol};
  Accumulator m2{report_for(AxiomId::m2_identity), tol};

  std::vector<Scalar> probe_scalars{Scalar(-1.0), Scalar(2.0)};
  if (backend.field() == Field::complex) probe_scalars.emplace_back(0.0, 1.0);

  for (const auto& e : atoms) {
    Witness wf{{e}, {}};
    idem.record(axiom_residual(AxiomId::idempotency, m, wf), wf);
    for (const auto& alpha : probe_scalars) {
      Witness wa{{e}, {alpha}};
      m1.record(axiom_residual(AxiomId::m1_homogeneity, m, wa), wa);
    }
    Witness wneg{{e, -e}, {}};
    m2.record(axiom_residual(AxiomId::m2_identity, m, wneg), wneg);
  }

  for (std::size_t s = 0; s < sample_count; ++s) {
    const auto f = random_element(backend, rng);
    const auto g = random_element(backend, rng);
    const auto alpha = random_scalar(backend.field(), rng);

    Witness wf{{f}, {}};
    idem.record(axiom_residual(AxiomId::idempotency, m, wf), wf);
    Witness wa{{f}, {alpha}};
    m1.record(axiom_residual(AxiomId::m1_homogeneity, m, wa), wa);
    Witness wfg{{f, g}, {}};
    m2.record(axiom_residual(AxiomId::m2_identity, m, wfg), wfg);
  }

  auto m3 = report_for(AxiomId::m3_spanning);
  Witness wb{atoms, {}};
  const auto span = axiom_residual(AxiomId::m3_spanning, m, wb);
  m3.samples = atoms.size();
  m3.max_residual = span.value;
  if (!tol.within(span.value, span.scale)) {
    m3.verdict = Verdict::fail;
    m3.witness = std::move(wb);
  }

  return {idem.report, m1.report, m2.report, m3};
}

AxiomReport check_archimedean(const ModulusMap& m, const LatticeElement& f,
                              const LatticeElement& g, std::size_t max_n,
                              const Tolerance& tol) {
  require_same_carrier(f, g);
  if (max_n == 0) throw InvalidArgument("archimedean depth N must be >= 1");

  auto report = report_for(AxiomId::archimedean);
  const auto mf = m(f);
  const auto mg = m(g);
  for (std::size_t n = 1; n <= max_n; ++n) {
    ++report.samples;
    const auto h = mg - static_cast<double>(n) * mf;
    const auto mh = m(h);
    const double residual = distance_inf(mh, h);
    if (!tol.within(residual, mg.norm_inf() + n * mf.norm_inf())) {
      report.first_violation = n;
      report.max_residual = residual;
      report.witness = Witness{{f, g}, {Scalar(static_cast<double>(n))}};
      return report;
    }
  }
  // Condition holds for every n <= N: only acceptable when f = 0.
  if (!f.is_zero()) {
    report.verdict = Verdict::fail;
    report.max_residual = f.norm_inf();
    report.witness = Witness{{f, g}, {Scalar(static_cast<double>(max_n))}};
  }
  return report;
}

}  // namespace latticekit
