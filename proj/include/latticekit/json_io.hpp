#pragma once

#include <json.hpp>

#include "latticekit/axioms.hpp"
#include "latticekit/complexify.hpp"
#include "latticekit/core.hpp"
#include "latticekit/multilinear.hpp"
#include "latticekit/opvar.hpp"
#include "latticekit/squaremean.hpp"
#include "latticekit/tensor.hpp"

namespace latticekit {

using Json = nlohmann::ordered_json;

Json to_json(const Backend& backend);
Json to_json(const LatticeElement& element);
Json to_json(const Witness& witness);
Json to_json(const AxiomReport& report);
/// {"domain-dims", "codomain-dim", "field", "re", "im"}; coefficients flat in (j, i_1..i_s).
Json to_json(const MultilinearMap& map);
Json to_json(const SigmaCertificate& cert);
Json to_json(const ThetaModulusCertificate& cert);
Json to_json(const DeSchipperCertificate& cert);
Json to_json(const RankCertificate& cert);
Json to_json(const VandermondeCertificate& cert);
Json to_json(const VariationResult& result);
Json to_json(const Certificate& cert);
Json to_json(const LbvCertificate& cert);

Backend backend_from_json(const Json& j);
LatticeElement element_from_json(const Json& j);
MultilinearMap map_from_json(const Json& j);

/// Complex matrix as {"re": [[...]], "im": [[...]]}.
Json complex_matrix_to_json(const MultilinearMap& matrix);
MultilinearMap complex_matrix_from_json(const Json& j);

}  // namespace latticekit
