#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "warpcheck/chen.hpp"
#include "warpcheck/scene.hpp"

namespace py = pybind11;
using namespace warpcheck;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const Mat& m) {
  Rows out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Mat from_rows(const Rows& rows) {
  Mat m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw Error(ErrorKind::invalid_input, "ragged matrix");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

py::dict to_dict(const ProofDecomposition& p) {
  py::dict d;
  d["delta"] = p.delta;
  d["a1"] = p.a1;
  d["a2"] = p.a2;
  d["a3"] = p.a3;
  d["b"] = p.b;
  d["tau"] = p.tau;
  d["tau_ambient"] = p.tau_ambient;
  d["norm_H2"] = p.norm_H2;
  d["sigma_norm2"] = p.sigma_norm2;
  d["a_i_residual"] = p.a_i_residual;
  d["h_delta_sigma_residual"] = p.h_delta_sigma_residual;
  d["lemma_margin"] = p.lemma_margin;
  d["ab_lhs"] = p.ab_lhs;
  d["ab_rhs"] = p.ab_rhs;
  d["trace_balance"] = p.trace_balance;
  d["h_defined_direction"] = p.h_defined_direction;
  return d;
}

RunOptions options(std::optional<std::uint64_t> seed, std::optional<std::size_t> samples) {
  RunOptions o;
  o.seed = seed;
  o.samples = samples;
  return o;
}

}  // namespace

PYBIND11_MODULE(_warpcheck, m) {
  m.doc() = "Numerical verification of warped-product immersion inequalities";
  m.attr("__version__") = std::string(version);

  static py::exception<Error> error(m, "WarpcheckError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Ambient>(m, "Ambient")
      .def_readonly("key", &Ambient::key)
      .def_readonly("dim", &Ambient::dim)
      .def_readonly("c", &Ambient::c)
      .def_readonly("notes", &Ambient::notes)
      .def_property_readonly("kappa", [](const Ambient& a) -> std::optional<double> {
        return a.contact ? std::optional<double>(a.contact->kappa) : std::nullopt;
      })
      .def_property_readonly("mu", [](const Ambient& a) -> std::optional<double> {
        return a.contact ? std::optional<double>(a.contact->mu) : std::nullopt;
      })
      .def("sectional", [](const Ambient& a, const std::vector<double>& x, const std::vector<double>& y) {
        return a.oracle.sectional(Vec(x), Vec(y));
      })
      .def("__repr__", [](const Ambient& a) { return "<Ambient " + a.key + ">"; });

  m.def("make_ambient", &make_ambient, py::arg("key"), py::arg("dim_hint") = std::nullopt);
  m.def("ambient_catalog_keys", &ambient_catalog_keys);
  m.def("immersion_catalog_keys", &immersion_catalog_keys);
  m.def("warped_catalog_keys", &warped_catalog_keys);
  m.def("check_names", &check_names);

  py::class_<PointwiseImmersionData>(m, "ImmersionData")
      .def_readonly("n1", &PointwiseImmersionData::n1)
      .def_readonly("n2", &PointwiseImmersionData::n2)
      .def_readonly("ambient_dim", &PointwiseImmersionData::ambient_dim)
      .def_property_readonly("frame", [](const PointwiseImmersionData& d) { return to_rows(d.frame); })
      .def_property_readonly("sigma", [](const PointwiseImmersionData& d) {
        std::vector<Rows> out;
        for (const Mat& s : d.sigma) out.push_back(to_rows(s));
        return out;
      })
      .def("perturb_cross", &perturb_cross, py::arg("r"), py::arg("j"), py::arg("t"), py::arg("eps"))
      .def("is_c_totally_real", [](const PointwiseImmersionData& d, double tol) { return is_C_totally_real(d, tol).value; },
           py::arg("tol") = 1e-10)
      .def("mixed_residual", &mixed_residual)
      .def("mean_curvature_norms", [](const PointwiseImmersionData& d) {
        const MeanCurvatureRecord r = mean_curvatures(d);
        return py::make_tuple(r.norm_H, r.norm_H1, r.norm_H2);
      });

  m.def(
      "pointwise_data",
      [](const Ambient& a, std::size_t n1, std::size_t n2, const Rows& frame, const std::vector<Rows>& sigma) {
        PointwiseImmersionData d;
        d.n1 = n1;
        d.n2 = n2;
        d.ambient_dim = a.dim;
        d.oracle = a.oracle;
        d.contact = a.contact;
        d.frame = frame.empty() ? Mat::identity(a.dim) : from_rows(frame);
        for (const Rows& s : sigma) d.sigma.push_back(from_rows(s));
        validate(d, 1e-8);
        return d;
      },
      py::arg("ambient"), py::arg("n1"), py::arg("n2"), py::arg("frame") = Rows{}, py::arg("sigma"));
  m.def(
      "random_data",
      [](const Ambient& a, std::size_t n1, std::size_t n2, const std::string& kind, std::uint64_t seed,
         std::uint64_t stream, double scale) {
        Rng rng = derive_rng(seed, stream);
        if (kind == "unconstrained") return random_immersion_data(rng, n1, n2, a, scale);
        if (kind == "equality") return equality_immersion_data(rng, n1, n2, a, scale);
        if (kind == "c-totally-real") return c_totally_real_data(rng, n1, n2, a, false, scale);
        if (kind == "c-totally-real-equality") return c_totally_real_data(rng, n1, n2, a, true, scale);
        throw Error(ErrorKind::invalid_input, "unknown kind '" + kind + "'");
      },
      py::arg("ambient"), py::arg("n1"), py::arg("n2"), py::arg("kind") = "unconstrained", py::arg("seed") = 0,
      py::arg("stream") = 0, py::arg("scale") = 1.0);
  m.def("dplus_leaf", &dplus_leaf, py::arg("ambient"), py::arg("n1"), py::arg("n2"));
  m.def(
      "chart_data",
      [](const std::string& key, const std::vector<double>& point) {
        const ChartImmersion im = immersion_catalog(key);
        return py::make_tuple(second_fundamental_form(im, point), chart_laplacian_ratio(im, point));
      },
      py::arg("key"), py::arg("point"), "Second fundamental form and Δf/f of a catalog chart immersion.");

  py::class_<InequalityReport>(m, "InequalityReport")
      .def_readonly("name", &InequalityReport::name)
      .def_readonly("lhs_source", &InequalityReport::lhs_source)
      .def_readonly("lhs", &InequalityReport::lhs)
      .def_readonly("rhs", &InequalityReport::rhs)
      .def_readonly("gap", &InequalityReport::gap)
      .def_readonly("equality", &InequalityReport::equality)
      .def_readonly("holds", &InequalityReport::holds)
      .def_readonly("values", &InequalityReport::values)
      .def_property_readonly("mixed_totally_geodesic",
                             [](const InequalityReport& r) { return r.diagnostics.mixed_totally_geodesic; })
      .def_property_readonly("partial_mean_equal",
                             [](const InequalityReport& r) { return r.diagnostics.partial_mean_equal; })
      .def("__repr__", [](const InequalityReport& r) {
        return "<InequalityReport " + r.name + " gap=" + std::to_string(r.gap) + ">";
      });

  auto lhs_of = [](std::optional<double> chart_lhs) {
    return chart_lhs ? LhsSource::chart(*chart_lhs) : LhsSource::tau_proxy();
  };
  auto opts_of = [](double equality_tol) { return InequalityOptions{equality_tol, equality_tol, 1e-9}; };
  m.def(
      "general_inequality",
      [=](const PointwiseImmersionData& d, std::optional<double> chart_lhs, double equality_tol) {
        return general_inequality(d, lhs_of(chart_lhs), opts_of(equality_tol));
      },
      py::arg("data"), py::arg("chart_lhs") = std::nullopt, py::arg("equality_tol") = 1e-8);
  m.def(
      "kmu_space_form_inequality",
      [=](const PointwiseImmersionData& d, double c, std::optional<double> chart_lhs, double equality_tol) {
        return kmu_space_form_inequality(d, c, lhs_of(chart_lhs), opts_of(equality_tol));
      },
      py::arg("data"), py::arg("c"), py::arg("chart_lhs") = std::nullopt, py::arg("equality_tol") = 1e-8);
  m.def(
      "non_sasakian_inequality",
      [=](const PointwiseImmersionData& d, std::optional<double> chart_lhs, double equality_tol) {
        return non_sasakian_inequality(d, lhs_of(chart_lhs), opts_of(equality_tol));
      },
      py::arg("data"), py::arg("chart_lhs") = std::nullopt, py::arg("equality_tol") = 1e-8);

  m.def("decompose", [](const PointwiseImmersionData& d) { return to_dict(decompose(d)); }, py::arg("data"));

  m.def(
      "chen_lemma",
      [](const std::vector<double>& a, std::optional<double> b, double tol) {
        const double bb = b ? *b : admissible_b(a);
        const LemmaResult r = chen_lemma(a, bb, tol);
        py::dict d;
        d["b"] = bb;
        d["margin"] = r.margin;
        d["constraint_residual"] = r.constraint_residual;
        d["tail_residual"] = r.tail_residual;
        d["holds"] = r.holds;
        d["equality"] = r.equality;
        return d;
      },
      py::arg("a"), py::arg("b") = std::nullopt, py::arg("tol") = 1e-10);

  m.def(
      "obstruction_check",
      [](const InequalityReport& r, bool harmonic, std::optional<double> eigenvalue, bool minimal, double tol) {
        const ObstructionResult o = obstruction_check(r, {harmonic, eigenvalue, minimal, tol});
        py::dict d;
        d["verdict"] = std::string(to_string(o.verdict));
        d["implied_lhs"] = o.implied_lhs;
        d["rhs_curvature"] = o.rhs_curvature;
        d["reason"] = o.reason;
        return d;
      },
      py::arg("report"), py::arg("harmonic") = false, py::arg("eigenvalue") = std::nullopt, py::arg("minimal") = false,
      py::arg("tol") = 1e-8);

  m.def(
      "laplacian_ratio",
      [](const std::string& warped_key, const std::vector<double>& point) {
        const LaplacianRatioReport r = check_laplacian_ratio(warped_catalog(warped_key).chart, point);
        py::dict d;
        d["laplacian_ratio"] = r.laplacian_ratio;
        d["per_fibre_sums"] = r.per_fibre_sums;
        d["max_deviation"] = r.max_deviation;
        return d;
      },
      py::arg("warped_key"), py::arg("point"));

  m.def(
      "verify_scene",
      [](const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::size_t> samples,
         const std::string& output) {
        const RunReport r = run(parse_scene(path), options(seed, samples));
        return py::make_tuple(r.exit_code(), emit(r, output == "text" ? OutputFormat::text : OutputFormat::json));
      },
      py::arg("path"), py::arg("seed") = std::nullopt, py::arg("samples") = std::nullopt, py::arg("output") = "json",
      "Runs a scene file; returns (exit_code, report).");
  m.def(
      "verify_scene_string",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::size_t> samples,
         const std::string& output) {
        const RunReport r = run(parse_scene_string(text), options(seed, samples));
        return py::make_tuple(r.exit_code(), emit(r, output == "text" ? OutputFormat::text : OutputFormat::json));
      },
      py::arg("text"), py::arg("seed") = std::nullopt, py::arg("samples") = std::nullopt, py::arg("output") = "json");
  m.def("echo_scene", [](const std::string& path) { return scene_to_json(parse_scene(path)); }, py::arg("path"));
}
