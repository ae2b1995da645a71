#include "latticekit/json_io.hpp"

namespace latticekit {

namespace {

template <class T>
std::vector<T> read_vector(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<std::vector<T>>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
  }
}

Json doubles(std::span<const double> values) { return Json(std::vector<double>(values.begin(), values.end())); }

}  // namespace

Json to_json(const Backend& backend) {
  Json j;
  j["kind"] = to_string(backend.kind());
  j["dimension"] = backend.dimension();
  j["field"] = to_string(backend.field());
  j["axes"] = backend.axes();
  return j;
}

Json to_json(const LatticeElement& element) {
  Json j;
  j["backend"] = to_json(element.backend());
  j["re"] = doubles(element.re());
  if (element.is_complex()) j["im"] = doubles(element.im());
  return j;
}

Json to_json(const Witness& witness) {
  Json j;
  j["elements"] = Json::array();
  for (const auto& e : witness.elements) j["elements"].push_back(to_json(e));
  j["scalars"] = Json::array();
  for (const auto& s : witness.scalars) j["scalars"].push_back({s.re(), s.im()});
  return j;
}

Json to_json(const AxiomReport& report) {
  Json j;
  j["axiom-id"] = to_string(report.axiom);
  j["verdict"] = to_string(report.verdict);
  j["witness"] = report.witness ? to_json(*report.witness) : Json(nullptr);
  j["max-residual"] = report.max_residual;
  if (report.first_violation) j["first-violation"] = *report.first_violation;
  j["samples"] = report.samples;
  return j;
}

Json to_json(const MultilinearMap& map) {
  Json j;
  j["domain-dims"] = map.domain_dims();
  j["codomain-dim"] = map.codomain_dim();
  j["field"] = to_string(map.field());
  std::vector<double> re;
  std::vector<double> im;
  for (const auto& c : map.coefficients()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["re"] = re;
  if (map.field() == Field::complex) j["im"] = im;
  return j;
}

Json to_json(const SigmaCertificate& cert) {
  Json j;
  j["depth"] = cert.depth;
  j["approx"] = doubles(cert.approximant.re());
  j["bound"] = doubles(cert.error_bound.re());
  j["grid-spacing"] = cert.grid_spacing;
  j["tuples-evaluated"] = cert.tuples_evaluated;
  return j;
}

Json to_json(const ThetaModulusCertificate& cert) {
  Json j;
  j["depth"] = cert.depth;
  j["approx"] = doubles(cert.approximant.re());
  j["bound"] = doubles(cert.error_bound.re());
  j["grid-spacing"] = cert.grid_spacing;
  return j;
}

Json to_json(const DeSchipperCertificate& cert) {
  Json j;
  j["rows"] = cert.rows;
  j["cols"] = cert.cols;
  j["depth"] = cert.depth;
  j["exact"] = cert.magnitude;
  j["approx"] = cert.theta_sup;
  j["bound"] = cert.gap_bound;
  j["below"] = cert.below;
  j["within-bound"] = cert.within_bound;
  j["max-gap"] = cert.max_gap;
  return j;
}

Json to_json(const RankCertificate& cert) {
  Json j;
  j["rows"] = cert.rows;
  j["cols"] = cert.cols;
  j["singular-values"] = cert.singular_values;
  j["numerical-rank"] = cert.numerical_rank;
  j["tolerance"] = cert.tolerance;
  return j;
}

Json to_json(const VandermondeCertificate& cert) {
  Json j;
  j["x"] = cert.x;
  j["alphas"] = cert.alphas;
  j["det-direct"] = cert.det_direct;
  j["det-product-formula"] = cert.det_product_formula;
  j["relative-gap"] = cert.relative_gap();
  j["nonzero"] = cert.nonzero;
  return j;
}

Json to_json(const VariationResult& result) {
  Json j;
  j["value"] = doubles(result.value.re());
  j["strategy"] = to_string(result.strategy);
  j["partitions-evaluated"] = result.partitions_evaluated;
  return j;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["holds"] = cert.holds;
  j["structural"] = cert.structural;
  j["sampled"] = cert.sampled;
  j["detail"] = cert.detail;
  j["max-residual"] = cert.max_residual;
  j["samples"] = cert.samples;
  if (cert.witness) {
    j["witness"] = Json::array();
    for (const auto& e : *cert.witness) j["witness"].push_back(to_json(e));
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const LbvCertificate& cert) {
  Json j;
  j["linear"] = cert.linear;
  j["bijective"] = cert.bijective;
  j["positive-both-ways"] = cert.positive_both_ways;
  j["modulus-correspondence"] = cert.modulus_correspondence;
  j["max-residual"] = cert.max_residual;
  j["samples"] = cert.samples;
  return j;
}

Backend backend_from_json(const Json& j) {
  const auto kind = j.value("kind", std::string("coordinate"));
  const auto field = field_from_string(j.value("field", std::string("real")));
  if (kind == "coordinate") {
    if (!j.contains("dimension")) throw InvalidArgument("missing field 'dimension'");
    return Backend::coordinate(j.at("dimension").get<std::size_t>(), field);
  }
  if (kind == "grid-function") {
    return Backend::product_grid(j.at("axes").get<std::vector<std::vector<double>>>(), field);
  }
  throw InvalidArgument("unknown backend kind '" + kind + "'");
}

LatticeElement element_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("element must be a JSON object");
  auto re = read_vector<double>(j, "re");
  if (!j.contains("backend")) {
    if (j.contains("im")) {
      return {Backend::coordinate(re.size(), Field::complex), std::move(re),
              read_vector<double>(j, "im")};
    }
    return LatticeElement::real(std::move(re));
  }
  const auto backend = backend_from_json(j.at("backend"));
  if (backend.field() == Field::complex) return {backend, std::move(re), read_vector<double>(j, "im")};
  return {backend, std::move(re)};
}

MultilinearMap map_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("map must be a JSON object");
  const auto dims = read_vector<std::size_t>(j, "domain-dims");
  if (!j.contains("codomain-dim")) throw InvalidArgument("missing field 'codomain-dim'");
  const auto codim = j.at("codomain-dim").get<std::size_t>();
  const auto field = field_from_string(j.value("field", std::string("real")));
  const auto re = read_vector<double>(j, "re");
  std::vector<double> im(re.size(), 0.0);
  if (field == Field::complex) im = read_vector<double>(j, "im");
  if (im.size() != re.size()) throw InvalidArgument("re and im lengths differ");
  std::vector<Complex> c(re.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = {re[k], im[k]};
  return {dims, codim, std::move(c), field};
}

Json complex_matrix_to_json(const MultilinearMap& matrix) {
  if (matrix.arity() != 1) throw InvalidArgument("expected a matrix (s = 1)");
  const std::size_t rows = matrix.codomain_dim();
  const std::size_t cols = matrix.domain_dims().front();
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> rr;
    std::vector<double> ii;
    for (std::size_t c = 0; c < cols; ++c) {
      rr.push_back(matrix.coefficient_flat(r, c).real());
      ii.push_back(matrix.coefficient_flat(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return Json{{"re", re}, {"im", im}};
}

MultilinearMap complex_matrix_from_json(const Json& j) {
  const auto re = read_vector<std::vector<double>>(j, "re");
  if (re.empty() || re.front().empty()) throw InvalidArgument("matrix must be non-empty");
  std::vector<std::vector<double>> im(re.size(), std::vector<double>(re.front().size(), 0.0));
  if (j.contains("im")) im = read_vector<std::vector<double>>(j, "im");
  if (im.size() != re.size()) throw InvalidArgument("re and im shapes differ");
  const std::size_t cols = re.front().size();
  std::vector<Complex> entries;
  for (std::size_t r = 0; r < re.size(); ++r) {
    if (re[r].size() != cols || im[r].size() != cols) throw InvalidArgument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) entries.emplace_back(re[r][c], im[r][c]);
  }
  return MultilinearMap::complex_matrix(re.size(), cols, std::move(entries));
}

}  // namespace latticekit
