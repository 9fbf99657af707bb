#include "gseq/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "gseq/campaign.hpp"
#include "gseq/estimates.hpp"
#include "gseq/field_io.hpp"
#include "gseq/parallel.hpp"

namespace gseq {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

ojson parse(const std::string& text) { return ojson::parse(text); }

struct Setup {
  GridGeometry g;
  Eigen::VectorXd u0, u1;
  SpaceTimeField f;
  std::optional<SpaceTimeField> exact;  // manufactured solution on the grid
};

Setup make_setup(const RunConfig& c) {
  const GridGeometry g = c.geometry();
  Setup s{g, boundary_slice(c.u0, g), boundary_slice(c.u1, g), SpaceTimeField(g), std::nullopt};
  if (c.f.type == "constant") {
    s.f = SpaceTimeField::constant(g, c.f.value);
  } else if (c.f.type == "analytic") {
    const AnalyticField ms = manufactured_solution(g.n(), g.L(), c.f.amplitude);
    s.exact = ms.sample(g);
    s.f = ms.fk(g);
    s.u0 = s.exact->level(0);
    s.u1 = s.exact->level(g.levels() - 1);
  } else {
    SpaceTimeField f = read_field(c.f.path);
    if (f.geometry() != g) throw ConfigError("$.f.path: field geometry differs from the configured grid");
    s.f = std::move(f);
  }
  return s;
}

bool constant_slice(const Eigen::VectorXd& v) { return (v.array() == v(0)).all(); }

// Homogeneous closed form: u = U_{-a(s)} with 2 a(s) lambda0^k C(n, k) = s.
double closed_form_a(const GridGeometry& g, double s) {
  return s / (2.0 * std::pow(g.lambda0(), g.k()) * binomial(g.n(), g.k()));
}

void write_solution(const fs::path& dir, const std::string& stem, const SpaceTimeField& u) {
  write_field((dir / stem).string(), u);
  write_csv_slice((dir / (stem + "_mid.csv")).string(), u, u.geometry().levels() / 2);
}

int run_certify(const RunConfig& c, const fs::path& dir, ojson& meta, std::ostream& log) {
  const CampaignSpec spec{c.n, c.k, c.samples, c.seed, c.threads};
  const auto t0 = std::chrono::steady_clock::now();
  const RootCampaign roots = run_root_campaign(spec);
  const ConcavityCampaign conc = run_concavity_campaign(spec);
  const IdentityCampaign ids = run_identity_campaign(spec);
  const SlackCampaign lem2 = run_lem2_campaign(spec);
  std::optional<SlackCampaign> andrews;
  if (c.n == 2 * c.k) andrews = run_andrews_campaign(spec);
  meta["campaign_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text(dir / "certify_report.json",
             campaign_json(spec, &roots, &conc, &ids, &lem2, andrews ? &*andrews : nullptr));
  const bool ok = roots.passed() && conc.passed() && ids.worst_identity_error() <= kIdentityTol &&
                  ids.worst_inequality_slack() >= -kIdentityTol && ids.min_newton_transform_eig > 0.0 &&
                  lem2.passed() && (!andrews || andrews->passed());
  log << "certify n=" << c.n << " k=" << c.k << " samples=" << c.samples << ": " << (ok ? "passed" : "FAILED")
      << "\n";
  return ok ? kExitOk : kExitCertFailure;
}

ojson solve_extras(const Setup& s, const SpaceTimeField& u) {
  ojson j;
  if (s.exact) j["manufactured_error"] = (u - *s.exact).sup_abs();
  return j;
}

int run_solve(const RunConfig& c, const fs::path& dir, ojson& meta, std::ostream& log) {
  const Setup s = make_setup(c);
  const double a = subsolution_constant(s.g, s.u0, s.u1, s.f);
  const SolveOutcome out = newton_solve(comparison_field(s.g, -a, s.u0, s.u1), s.f, c.solver);
  meta["solve_seconds"] = out.report.wall_time;
  ojson rep;
  rep["a"] = a;
  rep["solve"] = parse(out.report.to_json());
  rep["checks"] = solve_extras(s, out.state.u);
  write_text(dir / "solve_report.json", rep.dump(2) + "\n");
  write_solution(dir, "solution", out.state.u);
  log << "solve: " << (out.report.converged ? "converged" : "not converged") << " in " << out.report.iterations
      << " iterations, residual " << out.state.residual_norm << "\n";
  return out.report.converged ? kExitOk : kExitNoConvergence;
}

int run_path(const RunConfig& c, const fs::path& dir, ojson& meta, std::ostream& log) {
  const Setup s = make_setup(c);
  const ContinuityOutcome out = continuity_solve(s.g, s.u0, s.u1, s.f, c.solver);
  meta["path_seconds"] = out.report.wall_time;
  ojson rep;
  rep["a"] = out.a;
  rep["newton_calls"] = out.newton_calls;
  rep["halvings"] = out.halvings;
  rep["path"] = out.path;
  rep["solve"] = parse(out.report.to_json());
  rep["checks"] = solve_extras(s, out.state.u);
  write_text(dir / "path_report.json", rep.dump(2) + "\n");
  write_solution(dir, "solution", out.state.u);
  log << "path: " << (out.report.converged ? "converged" : "not converged") << ", a = " << out.a << "\n";
  return out.report.converged ? kExitOk : kExitNoConvergence;
}

int run_sweep(const RunConfig& c, const fs::path& dir, ojson& meta, std::ostream& log) {
  const Setup s = make_setup(c);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sw = degenerate_sweep(s.g, s.u0, s.u1, c.solver);
  meta["sweep_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ojson rep = parse(sw.to_json());

  const bool homogeneous = constant_slice(s.u0) && constant_slice(s.u1);
  auto bounds = ojson::array();
  for (const auto& st : sw.stages) {
    ojson b = parse(verify_bounds(st.state.u, sw.a).to_json());
    b["s"] = st.s;
    if (homogeneous) {
      const SpaceTimeField exact = comparison_field(s.g, -closed_form_a(s.g, st.s), s.u0, s.u1);
      b["closed_form_error"] = (st.state.u - exact).sup_abs();
    }
    bounds.push_back(b);
  }
  rep["bounds"] = bounds;
  if (2 * c.k <= c.n) {
    const ShrinkResult sh = shrink_to_strict(sw.limit, 1e-3, c.k);
    rep["shrink"] = {{"eps", 1e-3},
                     {"cone_margin", sh.cone_margin},
                     {"fk_min", sh.fk_min},
                     {"concavity_slack", sh.concavity_slack},
                     {"strict", sh.strict()}};
  }
  write_text(dir / "sweep_report.json", rep.dump(2) + "\n");
  write_solution(dir, "limit", sw.limit);
  write_field((dir / "extrapolated").string(), sw.extrapolated);
  log << "sweep: " << sw.stages.size() << " stages, " << (sw.converged ? "converged" : "not converged")
      << ", monotone " << (sw.monotone ? "yes" : "no") << "\n";
  return sw.converged ? kExitOk : kExitNoConvergence;
}

int run_verify(const RunConfig& c, const fs::path& dir, ojson& meta, std::ostream& log) {
  const Setup s = make_setup(c);
  const ContinuityOutcome out = continuity_solve(s.g, s.u0, s.u1, s.f, c.solver);
  meta["path_seconds"] = out.report.wall_time;
  const BoundReport b = verify_bounds(out.state.u, out.a);
  const double tol = 10.0 * c.solver.newton_tol;
  ojson rep;
  rep["a"] = out.a;
  rep["converged"] = out.report.converged;
  rep["bounds"] = parse(b.to_json());
  rep["bounds_hold"] = b.holds(tol);
  bool ok = b.holds(tol);
  if (!c.resolutions.empty()) {
    if (c.f.type != "constant" || c.u0.family == "file" || c.u1.family == "file")
      throw ConfigError("$.resolutions: refinement needs analytic boundary data and constant f");
    Problem p{c.n, c.k, c.L, c.lambda0, c.u0.slice, c.u1.slice, c.f.value};
    const RefinementStudy study = refinement_study(p, c.resolutions, c.solver);
    rep["refinement"] = parse(study.to_json());
    write_text(dir / "refinement.csv", study.to_csv());
  }
  write_text(dir / "bound_report.json", rep.dump(2) + "\n");
  write_solution(dir, "solution", out.state.u);
  log << "verify: bounds " << (ok ? "hold" : "VIOLATED") << "\n";
  if (!out.report.converged) return kExitNoConvergence;
  return ok ? kExitOk : kExitCertFailure;
}

int run_export(const RunConfig& c, const fs::path& dir, ojson& meta, std::ostream& log) {
  std::optional<SpaceTimeField> u;
  if (c.export_spec.source == "file") {
    u = read_field(c.export_spec.field);
  } else {
    const Setup s = make_setup(c);
    const ContinuityOutcome out = continuity_solve(s.g, s.u0, s.u1, s.f, c.solver);
    meta["path_seconds"] = out.report.wall_time;
    if (!out.report.converged) {
      log << "export: solve did not converge\n";
      return kExitNoConvergence;
    }
    u = out.state.u;
  }
  const GridGeometry& g = u->geometry();
  std::vector<int> levels = c.export_spec.levels;
  if (levels.empty()) levels = {0, g.levels() / 2, g.levels() - 1};
  auto files = ojson::array();
  for (int l : levels) {
    if (l < 0 || l >= g.levels()) throw ConfigError("$.export.levels: level outside the field");
    char name[64];
    std::snprintf(name, sizeof(name), "slice_level_%03d.csv", l);
    write_csv_slice((dir / name).string(), *u, l);
    files.push_back({{"level", l}, {"t", g.t(l)}, {"file", name}});
  }
  write_field((dir / "field").string(), *u);
  write_text(dir / "export_report.json", ojson{{"slices", files}}.dump(2) + "\n");
  log << "export: wrote " << levels.size() << " slices\n";
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, bool verbose, std::ostream& log) {
  set_thread_count(cfg.threads);
  RunConfig c = cfg;
  c.solver.verbose = verbose;
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_text(dir / "resolved_config.json", cfg.to_json());
  ojson meta;
  meta["mode"] = mode_name(c.mode);
  meta["threads"] = thread_count();
  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitOk;
  switch (c.mode) {
    case Mode::certify: code = run_certify(c, dir, meta, log); break;
    case Mode::solve: code = run_solve(c, dir, meta, log); break;
    case Mode::path: code = run_path(c, dir, meta, log); break;
    case Mode::sweep: code = run_sweep(c, dir, meta, log); break;
    case Mode::verify: code = run_verify(c, dir, meta, log); break;
    case Mode::export_: code = run_export(c, dir, meta, log); break;
  }
  meta["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  meta["exit_code"] = code;
  write_text(dir / "metadata.json", meta.dump(2) + "\n");
  return code;
}

}  // namespace gseq
