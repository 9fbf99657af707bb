#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gseq/campaign.hpp"
#include "gseq/estimates.hpp"
#include "gseq/hyperbolic.hpp"
#include "gseq/parallel.hpp"
#include "gseq/run_config.hpp"
#include "gseq/runner.hpp"
#include "gseq/solver.hpp"

namespace py = pybind11;
using namespace gseq;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Field values as a (levels, N^n) array.
RowMatrix to_array(const SpaceTimeField& u) {
  const GridGeometry& g = u.geometry();
  return Eigen::Map<const RowMatrix>(u.values().data(), g.levels(), g.spatial_size());
}

SpaceTimeField from_array(const GridGeometry& g, const RowMatrix& a) {
  if (a.rows() != g.levels() || a.cols() != g.spatial_size())
    throw DomainError("field array must have shape (Nt + 2, N^n)");
  Eigen::VectorXd v(g.size());
  Eigen::Map<RowMatrix>(v.data(), g.levels(), g.spatial_size()) = a;
  return SpaceTimeField(g, std::move(v));
}

BlockMatrix block(double r00, const Eigen::VectorXd& x, const Eigen::MatrixXd& r) {
  return BlockMatrix(r00, x, SymMatrix::from_dense(r));
}

SolverConfig solver_config(const py::dict& opts) {
  SolverConfig c;
  for (auto [key, value] : opts) {
    const auto k = key.cast<std::string>();
    if (k == "newton_tol") c.newton_tol = value.cast<double>();
    else if (k == "max_newton") c.max_newton = value.cast<int>();
    else if (k == "path_steps") c.path_steps = value.cast<int>();
    else if (k == "s_schedule") c.s_schedule = value.cast<std::vector<double>>();
    else if (k == "linear_solver") c.linear_solver = value.cast<std::string>();
    else if (k == "linear_tol") c.linear_tol = value.cast<double>();
    else throw py::key_error("unknown solver option: " + k);
  }
  c.validate();
  return c;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["residual_history"] = r.residual_history;
  d["diagnosis"] = r.diagnosis;
  d["cone_margin"] = r.margins.cone_margin;
  d["utt_min"] = r.margins.utt_min;
  d["fk_min"] = r.margins.fk_min;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gseq, m) {
  m.doc() = "sigma_k geodesic equation: certification campaigns and finite-difference solver";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("set_threads", &set_thread_count, py::arg("threads"));

  // Symmetric functions
  m.def("sigma_k", [](const std::vector<double>& lam, int k) { return sigma_k(EigenList(lam), k); },
        py::arg("lam"), py::arg("k"));
  m.def("sigma_k_matrix", [](const Eigen::MatrixXd& s, int k) { return sigma_k(SymMatrix::from_dense(s), k); },
        py::arg("s"), py::arg("k"));
  m.def("newton_transform",
        [](const Eigen::MatrixXd& s, int k) { return newton_transform(SymMatrix::from_dense(s), k).dense(); },
        py::arg("s"), py::arg("k"));
  m.def(
      "cone_test",
      [](const std::vector<double>& lam, int k) {
        const ConeLabel c = cone_test(EigenList(lam), k);
        return py::make_tuple(c.inside, c.margin);
      },
      py::arg("lam"), py::arg("k"), "(inside, margin) for the Garding cone Gamma_k^+");

  // Block operator and polynomials
  m.def("eval_fk", [](double r00, const Eigen::VectorXd& x, const Eigen::MatrixXd& r, int k) {
    return eval_Fk(block(r00, x, r), k);
  }, py::arg("r00"), py::arg("x"), py::arg("r"), py::arg("k"));
  m.def("p_poly", [](double r00, const Eigen::VectorXd& x, const Eigen::MatrixXd& r, int k) {
    return p_poly(block(r00, x, r), k).coeffs();
  }, py::arg("r00"), py::arg("x"), py::arg("r"), py::arg("k"), "Ascending coefficients of t -> F_k(R + tI).");
  m.def("shifted_sigma_poly", [](const Eigen::MatrixXd& r, int k) {
    return shifted_sigma_poly(SymMatrix::from_dense(r), k).coeffs();
  }, py::arg("r"), py::arg("k"));
  m.def(
      "certify",
      [](double r00, const Eigen::VectorXd& x, const Eigen::MatrixXd& r, int k, double tol) {
        const CertReport c = certify_theorem(block(r00, x, r), k, tol);
        py::dict d;
        d["real_rooted"] = c.real_rooted;
        d["interlaced"] = c.interlaced;
        d["localized"] = c.localized;
        d["localized_wide"] = c.localized_wide;
        d["max_imag_rel"] = c.max_imag_rel;
        d["interlace_slack"] = c.interlace_slack;
        d["leading_coeff"] = c.leading_coeff;
        return d;
      },
      py::arg("r00"), py::arg("x"), py::arg("r"), py::arg("k"), py::arg("tol") = 1e-8);

  m.def(
      "certify_campaign",
      [](int n, int k, long samples, std::uint64_t seed, int threads) {
        const CampaignSpec spec{n, k, samples, seed, threads};
        const RootCampaign roots = run_root_campaign(spec);
        const ConcavityCampaign conc = run_concavity_campaign(spec);
        const IdentityCampaign ids = run_identity_campaign(spec);
        std::optional<SlackCampaign> lem2, andrews;
        if (n >= 2 * k) lem2 = run_lem2_campaign(spec);
        if (n == 2 * k) andrews = run_andrews_campaign(spec);
        return campaign_json(spec, &roots, &conc, &ids, lem2 ? &*lem2 : nullptr, andrews ? &*andrews : nullptr);
      },
      py::arg("n"), py::arg("k"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
      "JSON report of the randomized certification campaigns.");

  // Grid
  py::class_<GridGeometry>(m, "Grid")
      .def(py::init<int, int, int, int, double, double>(), py::arg("n"), py::arg("k"), py::arg("N"), py::arg("Nt"),
           py::arg("L") = 2.0 * M_PI, py::arg("lambda0") = 0.5)
      .def_property_readonly("n", &GridGeometry::n)
      .def_property_readonly("k", &GridGeometry::k)
      .def_property_readonly("N", &GridGeometry::N)
      .def_property_readonly("Nt", &GridGeometry::Nt)
      .def_property_readonly("L", &GridGeometry::L)
      .def_property_readonly("lambda0", &GridGeometry::lambda0)
      .def_property_readonly("levels", &GridGeometry::levels)
      .def_property_readonly("spatial_size", &GridGeometry::spatial_size)
      .def("t", &GridGeometry::t, py::arg("level"))
      .def("position", &GridGeometry::position, py::arg("s"))
      .def("__repr__", [](const GridGeometry& g) {
        std::ostringstream os;
        os << "Grid(n=" << g.n() << ", k=" << g.k() << ", N=" << g.N() << ", Nt=" << g.Nt() << ")";
        return os.str();
      });

  m.def("comparison_field", [](const GridGeometry& g, double a, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1) {
    return to_array(comparison_field(g, a, u0, u1));
  }, py::arg("grid"), py::arg("a"), py::arg("u0"), py::arg("u1"), "U_a = a t(1-t) + (1-t) u0 + t u1.");
  m.def("fk_field", [](const GridGeometry& g, const RowMatrix& u) { return to_array(fk_field(from_array(g, u))); },
        py::arg("grid"), py::arg("u"));
  m.def("cosine_slice", [](const GridGeometry& g, double amplitude, int axis) {
    return SliceSpec::cosine(amplitude, axis, g.n()).sample(g);
  }, py::arg("grid"), py::arg("amplitude"), py::arg("axis"));

  m.def(
      "solve",
      [](const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1, const RowMatrix& f,
         const py::dict& opts) {
        const ContinuityOutcome out = continuity_solve(g, u0, u1, from_array(g, f), solver_config(opts));
        py::dict rep = report_dict(out.report);
        rep["a"] = out.a;
        rep["path"] = out.path;
        return py::make_tuple(to_array(out.state.u), rep);
      },
      py::arg("grid"), py::arg("u0"), py::arg("u1"), py::arg("f"), py::arg("options") = py::dict(),
      "Continuity-method solve of F_k(u) = f; returns (u, report).");

  m.def(
      "sweep",
      [](const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1, const py::dict& opts) {
        const SweepResult sw = degenerate_sweep(g, u0, u1, solver_config(opts));
        py::list stages;
        for (const auto& st : sw.stages) {
          py::dict d = report_dict(st.report);
          d["s"] = st.s;
          d["u"] = to_array(st.state.u);
          stages.append(d);
        }
        py::dict out;
        out["stages"] = stages;
        out["a"] = sw.a;
        out["monotone"] = sw.monotone;
        out["cauchy"] = sw.cauchy;
        out["limit"] = to_array(sw.limit);
        out["converged"] = sw.converged;
        return out;
      },
      py::arg("grid"), py::arg("u0"), py::arg("u1"), py::arg("options") = py::dict(),
      "Degenerate sweep f = s over the schedule.");

  m.def(
      "verify_bounds",
      [](const GridGeometry& g, const RowMatrix& u, double a) {
        return verify_bounds(from_array(g, u), a).to_json();
      },
      py::arg("grid"), py::arg("u"), py::arg("a"), "JSON report of the empirical a priori bounds.");

  m.def(
      "run_config",
      [](const std::string& text) {
        std::ostringstream log;
        const int code = run(parse_config(text), false, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("config_json"), "Runs a gs configuration; returns (exit code, log).");
}
