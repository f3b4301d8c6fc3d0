#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "maxstab/coeffs.hpp"
#include "maxstab/model_json.hpp"
#include "maxstab/models.hpp"
#include "maxstab/montecarlo.hpp"
#include "maxstab/orders.hpp"
#include "maxstab/projections.hpp"
#include "maxstab/zonoid.hpp"

namespace py = pybind11;
using namespace maxstab;

namespace {

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw std::invalid_argument("gamma must be a square matrix");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

CoefficientTable table_from_dict(int d, const py::dict& entries, const std::string& kind) {
  CoeffKind k;
  if (kind == "tau")
    k = CoeffKind::tau;
  else if (kind == "theta")
    k = CoeffKind::theta;
  else if (kind == "chi")
    k = CoeffKind::chi;
  else
    throw std::invalid_argument("kind must be tau, theta or chi");
  CoefficientTable t(d, k);
  for (const auto& item : entries) {
    const mask_t a = parse_subset_key(py::cast<std::string>(item.first), d);
    t.values[a] = py::cast<double>(item.second);
  }
  return t;
}

py::dict dict_from_table(const CoefficientTable& t) {
  py::dict out;
  for (mask_t a = 1; a <= full_mask(t.dim); ++a)
    out[py::str(subset_key(a))] = t.values[a];
  return out;
}

py::dict dict_from_ell(const EllValue& v) {
  py::dict out;
  out["value"] = v.value;
  switch (v.kind) {
    case ValueKind::exact: out["kind"] = "exact"; break;
    case ValueKind::quadrature: out["kind"] = "quadrature"; break;
    case ValueKind::monte_carlo: out["kind"] = "monte_carlo"; break;
  }
  if (v.kind == ValueKind::quadrature) out["tol"] = v.tol;
  if (v.kind == ValueKind::monte_carlo) {
    out["stderr"] = v.stderr_mean;
    out["n"] = v.n;
  }
  return out;
}

py::dict dict_from_verdict(const OrderVerdict& v) {
  py::dict out;
  out["relation"] = relation_name(v.relation);
  out["outcome"] = outcome_name(v.outcome);
  out["exactness"] = exactness_name(v.exactness);
  out["grid"] = v.grid;
  out["n_comparisons"] = v.n_comparisons;
  out["n_indeterminate"] = v.n_indeterminate;
  out["worst_forward"] = v.worst_forward;
  out["worst_backward"] = v.worst_backward;
  out["exit_code"] = cli_exit_code(v);
  if (!v.note.empty()) out["note"] = v.note;
  const auto witnesses = [](const std::vector<Witness>& ws) {
    py::list items;
    for (const Witness& w : ws) {
      py::dict j;
      if (!w.point.empty()) j["point"] = w.point;
      if (w.subset) j["subset"] = subset_key(w.subset);
      j["lhs"] = w.lhs;
      j["rhs"] = w.rhs;
      j["tol"] = w.tol;
      items.append(j);
    }
    return items;
  };
  out["forward_violations"] = witnesses(v.forward_violations);
  out["backward_violations"] = witnesses(v.backward_violations);
  py::list parts;
  for (const OrderVerdict& c : v.components) parts.append(dict_from_verdict(c));
  out["components"] = parts;
  return out;
}

EvalOptions eval_opts(std::uint64_t mc_n, std::uint64_t seed, double quad_tol) {
  EvalOptions eo;
  eo.mc_n = mc_n;
  eo.seed = seed;
  eo.quad_tol = quad_tol;
  return eo;
}

OrderOptions order_opts(std::uint64_t mc_n, std::uint64_t seed, double tol, double quad_tol,
                        int grid_m) {
  OrderOptions oo;
  oo.mc_n = mc_n;
  oo.seed = seed;
  oo.tol = tol;
  oo.quad_tol = quad_tol;
  oo.grid_m = grid_m;
  return oo;
}

std::vector<std::vector<double>> rows_of(const SampleMatrix& s) {
  std::vector<std::vector<double>> rows(s.n, std::vector<double>(s.d));
  for (std::uint64_t i = 0; i < s.n; ++i)
    for (int j = 0; j < s.d; ++j) rows[i][j] = s.row(i)[j];
  return rows;
}

}  // namespace

PYBIND11_MODULE(_maxstab, mod) {
  mod.doc() = "max-stable dependence models, stochastic orders and projections";

  py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);

  py::class_<ModelSpec>(mod, "Model")
      .def_static("independent", &ModelSpec::independent, py::arg("d"))
      .def_static("fully_dependent", &ModelSpec::fully_dependent, py::arg("d"))
      .def_static("dirichlet", &ModelSpec::dirichlet, py::arg("alpha"))
      .def_static(
          "husler_reiss",
          [](const std::vector<std::vector<double>>& gamma) {
            return ModelSpec::husler_reiss(matrix_from_rows(gamma));
          },
          py::arg("gamma"))
      .def_static(
          "choquet",
          [](int d, const py::dict& entries, const std::string& kind) {
            return ModelSpec::choquet(table_from_dict(d, entries, kind));
          },
          py::arg("d"), py::arg("entries"), py::arg("kind") = "tau")
      .def_property_readonly("d", &ModelSpec::dim)
      .def_property_readonly("family",
                             [](const ModelSpec& m) { return std::string(family_name(m.family())); })
      .def("ell",
           [](const ModelSpec& m, const std::vector<double>& x, std::uint64_t mc_n,
              std::uint64_t seed, double quad_tol) {
             return dict_from_ell(ell(m, x, eval_opts(mc_n, seed, quad_tol)));
           },
           py::arg("x"), py::arg("mc_n") = 100000, py::arg("seed") = 1,
           py::arg("quad_tol") = 1e-10)
      .def("cdf",
           [](const ModelSpec& m, const std::vector<double>& x, std::uint64_t mc_n,
              std::uint64_t seed, double quad_tol) {
             return dict_from_ell(cdf(m, x, eval_opts(mc_n, seed, quad_tol)));
           },
           py::arg("x"), py::arg("mc_n") = 100000, py::arg("seed") = 1,
           py::arg("quad_tol") = 1e-10)
      .def("pickands",
           [](const ModelSpec& m, const std::vector<double>& w, std::uint64_t mc_n,
              std::uint64_t seed, double quad_tol) {
             return dict_from_ell(pickands(m, w, eval_opts(mc_n, seed, quad_tol)));
           },
           py::arg("w"), py::arg("mc_n") = 100000, py::arg("seed") = 1,
           py::arg("quad_tol") = 1e-10)
      .def("theta",
           [](const ModelSpec& m, const std::string& subset) {
             return dict_from_ell(extremal_coefficient(m, parse_subset_key(subset, m.dim())));
           },
           py::arg("subset"))
      .def("chi",
           [](const ModelSpec& m, const std::string& subset) {
             return dict_from_ell(
                 tail_dependence_coefficient(m, parse_subset_key(subset, m.dim())));
           },
           py::arg("subset"))
      .def("marginalize",
           [](const ModelSpec& m, const std::string& subset) {
             return marginalize(m, parse_subset_key(subset, m.dim()));
           },
           py::arg("subset"))
      .def("tables",
           [](const ModelSpec& m) {
             py::dict out;
             out["tau"] = dict_from_table(m.tau());
             out["theta"] = dict_from_table(m.theta());
             out["chi"] = dict_from_table(m.chi());
             return out;
           })
      .def("to_json", [](const ModelSpec& m) { return model_to_json_text(m); })
      .def("__repr__", [](const ModelSpec& m) {
        return "<maxstab.Model " + std::string(family_name(m.family())) + " d=" +
               std::to_string(m.dim()) + ">";
      });

  mod.def("from_json", &model_from_json_text, py::arg("text"));
  mod.def(
      "associated_choquet",
      [](const ModelSpec& m, std::uint64_t mc_n, std::uint64_t seed) {
        return associated_choquet(m, eval_opts(mc_n, seed, 1e-10));
      },
      py::arg("model"), py::arg("mc_n") = 100000, py::arg("seed") = 1);

  const auto bind_order = [&mod](const char* name, auto fn) {
    mod.def(
        name,
        [fn](const ModelSpec& m1, const ModelSpec& m2, std::uint64_t mc_n, std::uint64_t seed,
             double tol, double quad_tol, int grid_m) {
          return dict_from_verdict(fn(m1, m2, order_opts(mc_n, seed, tol, quad_tol, grid_m)));
        },
        py::arg("lhs"), py::arg("rhs"), py::arg("mc_n") = 1000000, py::arg("seed") = 1,
        py::arg("tol") = 1e-9, py::arg("quad_tol") = 1e-10, py::arg("grid_m") = 0);
  };
  bind_order("check_lo", [](const ModelSpec& a, const ModelSpec& b, const OrderOptions& o) {
    return check_lo(a, b, o);
  });
  bind_order("check_uo", [](const ModelSpec& a, const ModelSpec& b, const OrderOptions& o) {
    return check_uo(a, b, o);
  });
  bind_order("check_pqd", [](const ModelSpec& a, const ModelSpec& b, const OrderOptions& o) {
    return check_pqd(a, b, o);
  });

  mod.def(
      "sample_generator",
      [](const ModelSpec& m, std::uint64_t n, std::uint64_t seed) {
        std::vector<double> block;
        fill_generator_block(m, n, seed, block);
        SampleMatrix s;
        s.n = n;
        s.d = m.dim();
        s.data = std::move(block);
        return rows_of(s);
      },
      py::arg("model"), py::arg("n"), py::arg("seed") = 1);
  mod.def(
      "sample_maxstable",
      [](const ModelSpec& m, std::uint64_t n, std::uint64_t seed) {
        return rows_of(sample_choquet_maxstable(m.tau(), n, seed));
      },
      py::arg("model"), py::arg("n"), py::arg("seed") = 1);
  mod.def(
      "estimate_ell",
      [](const ModelSpec& m, const std::vector<double>& x, std::uint64_t n, std::uint64_t seed) {
        const McEstimate e = estimate_ell(m, x, n, seed);
        py::dict out;
        out["mean"] = e.mean;
        out["stderr"] = e.stderr_mean;
        out["n"] = e.n;
        out["seed"] = e.seed;
        return out;
      },
      py::arg("model"), py::arg("x"), py::arg("n") = 100000, py::arg("seed") = 1);

  mod.def(
      "max_cdf",
      [](const ModelSpec& m, const std::vector<double>& a, double t, std::uint64_t mc_n,
         std::uint64_t seed) {
        return dict_from_ell(cdf_max_projection(m, a, t, eval_opts(mc_n, seed, 1e-10)));
      },
      py::arg("model"), py::arg("weights"), py::arg("t"), py::arg("mc_n") = 100000,
      py::arg("seed") = 1);
  mod.def(
      "min_survival",
      [](const ModelSpec& m, const std::vector<double>& a, double t, std::uint64_t mc_n,
         std::uint64_t seed) {
        return dict_from_ell(survival_min_projection(m, a, t, eval_opts(mc_n, seed, 1e-10)));
      },
      py::arg("model"), py::arg("weights"), py::arg("t"), py::arg("mc_n") = 100000,
      py::arg("seed") = 1);
  mod.def(
      "return_level",
      [](const ModelSpec& m, const std::vector<double>& a, const std::string& kind,
         double period, const std::string& scale, std::uint64_t mc_n, std::uint64_t seed) {
        const ProjectionKind k = kind == "max"   ? ProjectionKind::max
                                 : kind == "min" ? ProjectionKind::min
                                                 : throw std::invalid_argument(
                                                       "kind must be max or min");
        const LevelScale s = scale == "frechet"  ? LevelScale::frechet
                             : scale == "gumbel" ? LevelScale::gumbel
                                                 : throw std::invalid_argument(
                                                       "scale must be frechet or gumbel");
        return return_level(m, a, k, period, s, eval_opts(mc_n, seed, 1e-10));
      },
      py::arg("model"), py::arg("weights"), py::arg("kind"), py::arg("period"),
      py::arg("scale") = "frechet", py::arg("mc_n") = 100000, py::arg("seed") = 1);

  mod.def(
      "zonoid_envelope",
      [](const ModelSpec& m, int n_angles, double quad_tol) {
        const ZonoidPolyline poly = m.family() == Family::choquet ||
                                            m.family() == Family::independent ||
                                            m.family() == Family::fully_dependent
                                        ? choquet_zonoid_polyline(m)
                                        : envelope_bivariate(m, n_angles, quad_tol);
        std::vector<std::pair<double, double>> pts;
        pts.reserve(poly.points.size());
        for (const auto& p : poly.points) pts.emplace_back(p[0], p[1]);
        return pts;
      },
      py::arg("model"), py::arg("n_angles") = 720, py::arg("quad_tol") = 1e-10);
}
