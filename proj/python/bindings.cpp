#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "latticekit/axioms.hpp"
#include "latticekit/complexify.hpp"
#include "latticekit/experiments.hpp"
#include "latticekit/opvar.hpp"
#include "latticekit/squaremean.hpp"
#include "latticekit/tensor.hpp"

namespace py = pybind11;
namespace lk = latticekit;

namespace {

// Python-side elements are plain lists: floats for real, complex for complex.
lk::LatticeElement real_element(const std::vector<double>& values) {
  return lk::LatticeElement::real(values);
}

lk::LatticeElement element(const py::handle& obj) {
  std::vector<lk::Complex> values;
  bool complex = false;
  for (const auto& item : obj) {
    if (PyComplex_Check(item.ptr())) complex = true;
    values.push_back(item.cast<lk::Complex>());
  }
  if (complex) return lk::LatticeElement::complex(values);
  std::vector<double> re;
  for (const auto& v : values) re.push_back(v.real());
  return lk::LatticeElement::real(re);
}

py::list to_list(const lk::LatticeElement& e) {
  py::list out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.is_complex()) {
      out.append(py::cast(e[i]));
    } else {
      out.append(e.re()[i]);
    }
  }
  return out;
}

std::vector<lk::LatticeElement> elements(const py::sequence& seq) {
  std::vector<lk::LatticeElement> out;
  for (const auto& item : seq) out.push_back(element(item));
  return out;
}

std::vector<lk::TrigTerm> trig_terms(const std::vector<std::pair<std::vector<double>, std::vector<std::string>>>& terms) {
  std::vector<lk::TrigTerm> out;
  for (const auto& [coefficient, names] : terms) {
    std::vector<lk::Trig> fns;
    for (const auto& n : names) fns.push_back(lk::trig_from_string(n));
    out.emplace_back(real_element(coefficient), fns);
  }
  return out;
}

py::dict certificate_dict(const lk::Certificate& cert) {
  py::dict d;
  d["holds"] = cert.holds;
  d["structural"] = cert.structural;
  d["sampled"] = cert.sampled;
  d["detail"] = cert.detail;
  d["max_residual"] = cert.max_residual;
  d["samples"] = cert.samples;
  if (cert.witness) {
    py::list w;
    for (const auto& e : *cert.witness) w.append(to_list(e));
    d["witness"] = w;
  } else {
    d["witness"] = py::none();
  }
  return d;
}

py::dict rank_dict(const lk::RankCertificate& cert) {
  py::dict d;
  d["rows"] = cert.rows;
  d["cols"] = cert.cols;
  d["singular_values"] = cert.singular_values;
  d["numerical_rank"] = cert.numerical_rank;
  d["tolerance"] = cert.tolerance;
  return d;
}

Eigen::MatrixXd matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw lk::InvalidArgument("matrix must be non-empty");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw lk::InvalidArgument("ragged matrix rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

PyObject* factorization_error_type = nullptr;

}  // namespace

PYBIND11_MODULE(_latticekit, m) {
  m.doc() = "Certified computations on concrete vector lattices.";

  auto error = py::register_exception<lk::Error>(m, "LatticeError", PyExc_ValueError);
  auto factor_error =
      py::register_exception<lk::FactorizationError>(m, "FactorizationError", error.ptr());
  factorization_error_type = factor_error.ptr();
  // Carries the witness as the second exception argument.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lk::FactorizationError& e) {
      py::list w;
      for (const auto& x : e.witness()) w.append(to_list(x));
      PyErr_SetObject(factorization_error_type, py::make_tuple(e.what(), w).ptr());
    }
  });

  // Core -------------------------------------------------------------------
  m.def("modulus", [](const py::sequence& f) { return to_list(lk::modulus(element(f))); });
  m.def("sup", [](const std::vector<double>& f, const std::vector<double>& g) {
    return to_list(lk::sup(real_element(f), real_element(g)));
  });
  m.def("inf", [](const std::vector<double>& f, const std::vector<double>& g) {
    return to_list(lk::inf(real_element(f), real_element(g)));
  });

  m.def(
      "check_modulus_axioms",
      [](std::optional<std::function<std::vector<lk::Complex>(std::vector<lk::Complex>)>> candidate,
         std::size_t dimension, const std::string& field, std::size_t samples, double tolerance,
         std::uint64_t seed) {
        lk::ModulusMap map = lk::builtin_modulus();
        if (candidate) {
          map = [fn = *candidate](const lk::LatticeElement& f) {
            std::vector<lk::Complex> in;
            for (std::size_t i = 0; i < f.size(); ++i) in.push_back(f[i]);
            const auto out = fn(in);
            if (f.is_complex()) return lk::LatticeElement::complex(out);
            std::vector<double> re;
            for (const auto& v : out) re.push_back(v.real());
            return lk::LatticeElement(f.backend(), re);
          };
        }
        const auto backend = lk::Backend::coordinate(dimension, lk::field_from_string(field));
        py::list out;
        for (const auto& r : lk::check_modulus_axioms(map, backend, samples, {tolerance, 0.0}, seed)) {
          py::dict d;
          d["axiom"] = lk::to_string(r.axiom);
          d["verdict"] = lk::to_string(r.verdict);
          d["max_residual"] = r.max_residual;
          d["samples"] = r.samples;
          if (r.witness) {
            py::list w;
            for (const auto& e : r.witness->elements) w.append(to_list(e));
            d["witness"] = w;
          } else {
            d["witness"] = py::none();
          }
          out.append(d);
        }
        return out;
      },
      py::arg("candidate") = py::none(), py::arg("dimension") = 4, py::arg("field") = "real",
      py::arg("samples") = 1000, py::arg("tolerance") = 1e-12, py::arg("seed") = 0,
      "Axiom reports for a candidate modulus (None for the built-in one).");

  // Square mean ---------------------------------------------------------------
  m.def("mu24", [](const std::vector<double>& f, const std::vector<double>& g) {
    return to_list(lk::mu24(real_element(f), real_element(g)));
  });
  m.def("boxplus", [](const std::vector<double>& f, const std::vector<double>& g) {
    return to_list(lk::boxplus(real_element(f), real_element(g)));
  });
  m.def(
      "sigma_m",
      [](const std::vector<std::pair<std::vector<double>, std::vector<std::string>>>& terms, int depth,
         std::size_t budget) {
        const auto cert = lk::sigma_m(trig_terms(terms), depth, budget);
        py::dict d;
        d["depth"] = cert.depth;
        d["approx"] = to_list(cert.approximant);
        d["bound"] = to_list(cert.error_bound);
        d["grid_spacing"] = cert.grid_spacing;
        return d;
      },
      py::arg("terms"), py::arg("m"), py::arg("budget") = lk::kDefaultGridBudget,
      "Dyadic-grid approximant of sup sum u_k prod t_kj(theta) with its error bound.\n"
      "terms: list of (coefficient list, list of 'cos'/'sin').");
  m.def("trig_sup_closed_form",
        [](const std::vector<std::pair<std::vector<double>, std::vector<std::string>>>& terms) {
          return to_list(lk::trig_sup_closed_form(trig_terms(terms)));
        });

  // Complexification ------------------------------------------------------------
  m.def(
      "complex_modulus_theta",
      [](const std::vector<double>& re, const std::vector<double>& im, int depth) {
        const auto cert =
            lk::complex_modulus_theta(lk::ComplexPair(real_element(re), real_element(im)), depth);
        py::dict d;
        d["approx"] = to_list(cert.approximant);
        d["bound"] = to_list(cert.error_bound);
        d["depth"] = cert.depth;
        return d;
      },
      py::arg("re"), py::arg("im"), py::arg("m"));
  m.def("complex_modulus_exact", [](const std::vector<double>& re, const std::vector<double>& im) {
    return to_list(lk::complex_modulus_exact(lk::ComplexPair(real_element(re), real_element(im))));
  });
  m.def(
      "de_schipper_check",
      [](const std::vector<std::vector<lk::Complex>>& rows, int depth) {
        if (rows.empty() || rows.front().empty()) throw lk::InvalidArgument("matrix must be non-empty");
        std::vector<lk::Complex> entries;
        for (const auto& r : rows) {
          if (r.size() != rows.front().size()) throw lk::InvalidArgument("ragged matrix rows");
          entries.insert(entries.end(), r.begin(), r.end());
        }
        const auto cert = lk::de_schipper_check(
            lk::MultilinearMap::complex_matrix(rows.size(), rows.front().size(), entries), depth);
        py::dict d;
        d["magnitude"] = cert.magnitude;
        d["theta_sup"] = cert.theta_sup;
        d["gap_bound"] = cert.gap_bound;
        d["holds"] = cert.holds();
        d["max_gap"] = cert.max_gap;
        return d;
      },
      py::arg("matrix"), py::arg("m"));

  // Multilinear maps -------------------------------------------------------------
  py::class_<lk::MultilinearMap>(m, "MultilinearMap")
      .def(py::init([](std::vector<std::size_t> dims, std::size_t codim,
                       std::vector<lk::Complex> coefficients, const std::string& field) {
             return lk::MultilinearMap(std::move(dims), codim, std::move(coefficients),
                                       lk::field_from_string(field));
           }),
           py::arg("domain_dims"), py::arg("codomain_dim"), py::arg("coefficients"),
           py::arg("field") = "real",
           "Coefficients are flat in (j, i_1, ..., i_s) order, i_s fastest.")
      .def_static("coordinatewise_product", &lk::MultilinearMap::coordinatewise_product)
      .def_property_readonly("arity", &lk::MultilinearMap::arity)
      .def_property_readonly("domain_dims", &lk::MultilinearMap::domain_dims)
      .def_property_readonly("codomain_dim", &lk::MultilinearMap::codomain_dim)
      .def_property_readonly("field", [](const lk::MultilinearMap& t) { return lk::to_string(t.field()); })
      .def_property_readonly("coefficients",
                             [](const lk::MultilinearMap& t) {
                               return std::vector<lk::Complex>(t.coefficients().begin(),
                                                               t.coefficients().end());
                             })
      .def("apply", [](const lk::MultilinearMap& t, const py::sequence& args) {
        return to_list(lk::apply(t, elements(args)));
      })
      .def("entrywise_modulus", &lk::MultilinearMap::entrywise_modulus)
      .def("complexify", [](const lk::MultilinearMap& t) { return lk::complexify_multilinear(t); })
      .def("apply_complexified", [](const lk::MultilinearMap& t, const py::sequence& args) {
        std::vector<lk::ComplexPair> pairs;
        for (const auto& e : elements(args)) pairs.push_back(lk::ComplexPair::from(e));
        return to_list(lk::apply_complexified(t, pairs));
      });

  // Tensor ---------------------------------------------------------------------
  m.def(
      "slice_rank",
      [](const std::vector<std::vector<double>>& samples, double tol) {
        return rank_dict(lk::slice_rank(matrix(samples), tol));
      },
      py::arg("samples"), py::arg("tolerance") = 1e-8);
  m.def("vandermonde_certificate", [](double x, std::vector<double> alphas) {
    const auto cert = lk::vandermonde_certificate(x, std::move(alphas));
    py::dict d;
    d["det_direct"] = cert.det_direct;
    d["det_product_formula"] = cert.det_product_formula;
    d["relative_gap"] = cert.relative_gap();
    d["nonzero"] = cert.nonzero;
    return d;
  });
  m.def(
      "incompleteness_witness",
      [](const std::vector<double>& x, const std::vector<double>& y, std::size_t r,
         std::size_t box, double tol, std::uint64_t seed) {
        const auto report = lk::incompleteness_witness(x, y, r, box, tol, seed);
        py::dict d;
        d["radial"] = rank_dict(report.radial);
        d["comparator"] = rank_dict(report.comparator);
        d["min_radial_box_rank"] = report.min_radial_box_rank();
        d["max_comparator_box_rank"] = report.max_comparator_box_rank();
        d["radial_full_rank"] = report.radial_full_rank();
        d["comparator_within_bound"] = report.comparator_within_bound();
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("r"), py::arg("box") = 5, py::arg("tolerance") = 1e-8,
      py::arg("seed") = 0);

  // Operators of bounded variation ---------------------------------------------
  m.def(
      "variation_modulus",
      [](const lk::MultilinearMap& t, const std::vector<std::vector<double>>& targets,
         const std::string& strategy, std::size_t budget, std::uint64_t seed) {
        std::vector<lk::LatticeElement> a;
        for (const auto& v : targets) a.push_back(real_element(v));
        return to_list(lk::variation_modulus(t, a, lk::strategy_from_string(strategy), budget, seed).value);
      },
      py::arg("map"), py::arg("targets"), py::arg("strategy") = "atomic", py::arg("budget") = 1,
      py::arg("seed") = 0);
  m.def(
      "is_orthosymmetric",
      [](const lk::MultilinearMap& t, std::size_t samples, std::uint64_t seed) {
        return certificate_dict(lk::is_orthosymmetric(t, samples, seed));
      },
      py::arg("map"), py::arg("samples") = 100, py::arg("seed") = 0);
  m.def(
      "is_s_morphism",
      [](const lk::MultilinearMap& t, std::size_t samples, std::uint64_t seed) {
        return certificate_dict(lk::is_s_morphism(t, samples, seed));
      },
      py::arg("map"), py::arg("samples") = 100, py::arg("seed") = 0);
  m.def("s_power", [](std::size_t n, std::size_t s) {
    const auto p = lk::s_power(n, s);
    py::dict d;
    d["tensor_dim"] = p.tensor_dim;
    d["ideal_dim"] = p.ideal_dim();
    d["quotient_dim"] = p.quotient_dim();
    d["ideal_atoms"] = p.ideal_atoms;
    d["diagonal_atoms"] = p.diagonal_atoms;
    return d;
  });
  m.def(
      "factor_through_power",
      [](const lk::MultilinearMap& t, std::size_t samples, std::uint64_t seed) {
        if (t.arity() < 2) throw lk::InvalidArgument("s-power needs s >= 2");
        const auto f = lk::factor_through_power(t, lk::s_power(t.domain_dims().front(), t.arity()),
                                                samples, seed);
        return py::make_tuple(f.linear, f.residual);
      },
      py::arg("map"), py::arg("samples") = 100, py::arg("seed") = 0,
      "Returns (linear map on the power, residual). Raises FactorizationError(message, witness).");
  m.def(
      "factor_through_tensor",
      [](const lk::MultilinearMap& t, std::size_t samples, std::uint64_t seed) {
        const auto f = lk::factor_through_tensor(t, samples, seed);
        return py::make_tuple(f.linear, f.residual);
      },
      py::arg("map"), py::arg("samples") = 100, py::arg("seed") = 0);
  m.def(
      "check_lbv_isomorphism",
      [](const std::vector<std::size_t>& dims, std::size_t codim, std::size_t samples,
         std::uint64_t seed) {
        const auto c = lk::check_lbv_isomorphism(dims, codim, samples, seed);
        py::dict d;
        d["holds"] = c.holds();
        d["linear"] = c.linear;
        d["bijective"] = c.bijective;
        d["positive_both_ways"] = c.positive_both_ways;
        d["modulus_correspondence"] = c.modulus_correspondence;
        d["max_residual"] = c.max_residual;
        return d;
      },
      py::arg("domain_dims"), py::arg("codomain_dim"), py::arg("samples") = 100, py::arg("seed") = 0);

  // Experiments ------------------------------------------------------------------
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto json = lk::Json::parse(config_json, nullptr, false);
        if (json.is_discarded()) throw lk::InvalidArgument("config is not valid JSON");
        std::ostringstream out;
        std::ostringstream err;
        int code = lk::kExitValidation;
        try {
          auto config = lk::ExperimentConfig::from_json(json);
          config.output.clear();
          code = lk::run(config, out, err);
        } catch (const lk::ValidationError& e) {
          err << e.what();
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("config_json"),
      "Runs an experiment from a JSON config; returns (exit code, table text, messages).");
  m.attr("experiment_ids") = lk::experiment_ids();
}
