#include "gseq/solver.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>

#include "gseq/hyperbolic.hpp"

namespace gseq {

std::vector<double> SolverConfig::default_schedule(int last_exponent) {
  std::vector<double> s;
  for (int e = 0; e <= last_exponent; ++e) s.push_back(std::ldexp(1.0, -e));
  return s;
}

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0)) throw DomainError("solver.newton_tol must be positive");
  if (max_newton < 1) throw DomainError("solver.max_newton must be positive");
  if (!(armijo_ratio > 0.0 && armijo_ratio < 1.0)) throw DomainError("solver.armijo_ratio must lie in (0, 1)");
  if (!(armijo_slope > 0.0 && armijo_slope < 1.0)) throw DomainError("solver.armijo_slope must lie in (0, 1)");
  if (!(margin_floor > 0.0)) throw DomainError("solver.margin_floor must be positive");
  if (path_steps < 1) throw DomainError("solver.path_steps must be positive");
  if (!(linear_tol > 0.0)) throw DomainError("solver.linear_tol must be positive");
  if (gmres_restart < 1 || gmres_max_iters < 1) throw DomainError("solver.gmres settings must be positive");
  if (linear_solver != "gmres" && linear_solver != "direct")
    throw DomainError("solver.linear_solver must be \"gmres\" or \"direct\"");
  if (s_schedule.empty()) throw DomainError("solver.s_schedule must not be empty");
  for (std::size_t i = 0; i < s_schedule.size(); ++i) {
    if (!(s_schedule[i] > 0.0)) throw DomainError("solver.s_schedule entries must be positive");
    if (i > 0 && !(s_schedule[i] < s_schedule[i - 1])) throw DomainError("solver.s_schedule must be decreasing");
  }
}

std::string SolveReport::to_json() const {
  nlohmann::ordered_json j;
  j["converged"] = converged;
  j["iterations"] = iterations;
  j["residual_history"] = residual_history;
  j["target"] = target;
  j["roundoff_floor"] = roundoff_floor;
  j["floor_limited"] = floor_limited;
  j["margins"] = {{"cone", margins.cone_margin}, {"utt", margins.utt_min}, {"fk", margins.fk_min}};
  j["line_search_shrinks"] = line_search_shrinks;
  j["linear_fallbacks"] = linear_fallbacks;
  j["diagnosis"] = diagnosis;
  return j.dump(2) + "\n";
}

double interior_sup(const SpaceTimeField& f) {
  return f.interior().cwiseAbs().maxCoeff();
}

double interior_min(const SpaceTimeField& f) { return f.interior().minCoeff(); }

double residual_sup(const SpaceTimeField& u, const SpaceTimeField& f) { return interior_sup(residual(u, f)); }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool margins_ok(const AdmissibilityReport& r, double floor) {
  return r.cone_margin >= floor && r.utt_min >= floor && r.fk_min >= floor;
}

std::string worst_margin_text(const GridGeometry& g, const AdmissibilityReport& r) {
  if (r.cone_margin <= r.utt_min && r.cone_margin <= r.fk_min)
    return "cone margin " + std::to_string(r.cone_margin) + " at " + point_name(g, r.cone_level, r.cone_s);
  if (r.utt_min <= r.fk_min) return "u_tt " + std::to_string(r.utt_min) + " at " + point_name(g, r.utt_level, r.utt_s);
  return "F_k " + std::to_string(r.fk_min) + " at " + point_name(g, r.fk_level, r.fk_s);
}

// Noise level of the residual evaluation: eps times the row-wise sum of
// |dF/du_j| |u_j|, including the Dirichlet columns through sup|u|.
double roundoff_floor(const LinearOperator& j, const SpaceTimeField& u) {
  const double scale = u.sup_abs() + 1.0;
  double worst = 0.0;
  const auto& m = j.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double row = 0.0;
    for (LinearOperator::Matrix::InnerIterator it(m, r); it; ++it) row += std::abs(it.value());
    worst = std::max(worst, row);
  }
  return 64.0 * std::numeric_limits<double>::epsilon() * worst * scale;
}

Eigen::VectorXd solve_linear(const LinearOperator& op, const Eigen::VectorXd& rhs, const SolverConfig& cfg,
                             int& fallbacks) {
  const auto& a = op.matrix();
  if (cfg.linear_solver == "gmres") {
    Eigen::GMRES<LinearOperator::Matrix, Eigen::IncompleteLUT<double>> gm;
    gm.setTolerance(cfg.linear_tol);
    gm.set_restart(cfg.gmres_restart);
    gm.setMaxIterations(cfg.gmres_max_iters);
    gm.preconditioner().setDroptol(1e-3);
    gm.preconditioner().setFillfactor(5);
    gm.compute(a);
    if (gm.info() == Eigen::Success) {
      Eigen::VectorXd x = gm.solve(rhs);
      if (gm.info() == Eigen::Success && x.allFinite()) {
        const double rel = (a * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
        if (rel <= 10.0 * cfg.linear_tol) return x;
      }
    }
    ++fallbacks;
  }
  Eigen::SparseMatrix<double> col(a);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(col);
  lu.factorize(col);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
  return lu.solve(rhs);
}

}  // namespace

SolveOutcome newton_solve(const SpaceTimeField& u_init, const SpaceTimeField& f, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const GridGeometry& g = u_init.geometry();
  if (f.geometry() != g) throw DomainError("newton_solve: f and u_init geometries differ");
  if (!(interior_min(f) > 0.0)) throw DomainError("newton_solve: f must be positive on interior levels");
  const AdmissibilityReport start = admissibility_scan(u_init);
  if (!start.positive()) throw DomainError("newton_solve: initial field not admissible: " + worst_margin_text(g, start));

  SolveOutcome out{SolveState{u_init, f, 0.0, 0}, SolveReport{}};
  SolveReport& rep = out.report;
  SpaceTimeField& u = out.state.u;
  rep.target = cfg.newton_tol * interior_sup(f);
  rep.margins = start;

  SpaceTimeField r = residual(u, f);
  double rnorm = interior_sup(r);
  rep.residual_history.push_back(rnorm);
  for (int it = 0;; ++it) {
    const LinearOperator jac = linearize(u);
    rep.roundoff_floor = roundoff_floor(jac, u);
    if (rnorm <= rep.target || rnorm <= rep.roundoff_floor) {
      rep.converged = true;
      rep.floor_limited = rnorm > rep.target;
      break;
    }
    if (it >= cfg.max_newton) {
      rep.diagnosis = "iteration cap reached";
      break;
    }
    const Eigen::VectorXd delta = solve_linear(jac, -r.interior(), cfg, rep.linear_fallbacks);

    double alpha = 1.0;
    bool accepted = false;
    AdmissibilityReport last;
    while (alpha >= 1e-14) {
      SpaceTimeField trial = u;
      trial.set_interior(u.interior() + alpha * delta);
      last = admissibility_scan(trial);
      if (margins_ok(last, cfg.margin_floor)) {
        SpaceTimeField rt = residual(trial, f);
        const double tn = interior_sup(rt);
        if (tn <= (1.0 - cfg.armijo_slope * alpha) * rnorm) {
          u = std::move(trial);
          r = std::move(rt);
          rnorm = tn;
          rep.margins = last;
          accepted = true;
          break;
        }
      }
      alpha *= cfg.armijo_ratio;
      ++rep.line_search_shrinks;
    }
    if (!accepted) {
      // A full step that fails only on Armijo at the noise level is convergence.
      if (rnorm <= 4.0 * rep.roundoff_floor) {
        rep.converged = true;
        rep.floor_limited = true;
        break;
      }
      rep.diagnosis = "line search collapse; worst trial " + worst_margin_text(g, last);
      break;
    }
    rep.iterations = it + 1;
    rep.residual_history.push_back(rnorm);
    if (cfg.verbose)
      std::cerr << "newton " << rep.iterations << ": residual " << rnorm << " step " << alpha << "\n";
  }
  out.state.residual_norm = rnorm;
  out.state.step = rep.iterations;
  rep.wall_time = seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------------------

double subsolution_constant(const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                            const SpaceTimeField& f_target) {
  const double fmax = f_target.interior().maxCoeff();
  for (double a = 1.0; a <= 1e6; a *= 2.0) {
    const SpaceTimeField w = comparison_field(g, -a, u0, u1);
    const AdmissibilityReport rep = admissibility_scan(w);
    if (!(rep.cone_margin > 0.0))
      throw DomainError("subsolution search: A_w outside Gamma_k^+ at " + point_name(g, rep.cone_level, rep.cone_s) +
                        " (boundary data not admissible)");
    if (rep.utt_min > 0.0 && rep.fk_min > fmax) return a;
  }
  throw DomainError("subsolution search: no a <= 1e6 makes F_k(U_{-a}) exceed max f");
}

ContinuityOutcome continuity_solve(const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                                   const SpaceTimeField& f_target, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  if (!(interior_min(f_target) > 0.0)) throw DomainError("continuity_solve: f_target must be positive");
  const double a = subsolution_constant(g, u0, u1, f_target);
  const SpaceTimeField w = comparison_field(g, -a, u0, u1);
  const SpaceTimeField f0 = fk_field(w);

  ContinuityOutcome out{SolveState{w, f0, 0.0, 0}, SolveReport{}, a, 0, 0, {}};
  double s = 0.0;
  double ds = 1.0 / cfg.path_steps;
  int total_iters = 0;
  int shrinks = 0;
  int fallbacks = 0;
  while (s < 1.0) {
    double next = std::min(1.0, s + ds);
    if (1.0 - next < 1e-12) next = 1.0;
    const SpaceTimeField fs = (1.0 - next) * f0 + next * f_target;
    SolveOutcome step = newton_solve(out.state.u, fs, cfg);
    ++out.newton_calls;
    total_iters += step.report.iterations;
    shrinks += step.report.line_search_shrinks;
    fallbacks += step.report.linear_fallbacks;
    if (step.report.converged) {
      s = next;
      out.path.push_back(s);
      out.state = std::move(step.state);
      out.report = std::move(step.report);
      if (cfg.verbose) std::cerr << "path s = " << s << "\n";
      continue;
    }
    ds *= 0.5;
    ++out.halvings;
    if (ds < std::ldexp(1.0, -20)) {
      out.report = std::move(step.report);
      out.report.converged = false;
      out.report.diagnosis = "continuity path step underflow at s = " + std::to_string(s) + "; " + out.report.diagnosis;
      break;
    }
  }
  out.report.iterations = total_iters;
  out.report.line_search_shrinks = shrinks;
  out.report.linear_fallbacks = fallbacks;
  out.report.wall_time = seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------------------

std::string SweepResult::to_json() const {
  nlohmann::ordered_json j;
  j["converged"] = converged;
  j["a"] = a;
  j["monotone"] = monotone;
  j["worst_monotonicity"] = worst_monotonicity;
  j["cauchy"] = cauchy;
  auto st = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    st.push_back({{"s", s.s},
                  {"converged", s.report.converged},
                  {"iterations", s.report.iterations},
                  {"residual", s.state.residual_norm},
                  {"line_search_shrinks", s.report.line_search_shrinks},
                  {"utt_min", s.report.margins.utt_min},
                  {"cone_margin", s.report.margins.cone_margin},
                  {"fk_min", s.report.margins.fk_min}});
  }
  j["stages"] = st;
  return j.dump(2) + "\n";
}

SweepResult degenerate_sweep(const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                             const SolverConfig& cfg) {
  cfg.validate();
  SweepResult out(g);
  const auto& sched = cfg.s_schedule;
  {
    const SpaceTimeField f = SpaceTimeField::constant(g, sched[0]);
    ContinuityOutcome first = continuity_solve(g, u0, u1, f, cfg);
    out.a = first.a;
    out.stages.push_back({sched[0], std::move(first.state), std::move(first.report)});
  }
  for (std::size_t i = 1; i < sched.size() && out.stages.back().report.converged; ++i) {
    const SpaceTimeField f = SpaceTimeField::constant(g, sched[i]);
    SolveOutcome next = newton_solve(out.stages.back().state.u, f, cfg);
    if (cfg.verbose)
      std::cerr << "sweep s = " << sched[i] << ": " << (next.report.converged ? "converged" : "failed") << " in "
                << next.report.iterations << " iterations\n";
    out.stages.push_back({sched[i], std::move(next.state), std::move(next.report)});
  }
  for (const auto& st : out.stages) out.converged = out.converged && st.report.converged;

  // Comparison principle: s <= s~ implies u^s >= u^s~.
  out.worst_monotonicity = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.stages.size(); ++i)
    for (std::size_t j = i + 1; j < out.stages.size(); ++j) {
      const double m = (out.stages[j].state.u.values() - out.stages[i].state.u.values()).minCoeff();
      out.worst_monotonicity = std::min(out.worst_monotonicity, m);
    }
  if (out.stages.size() < 2) out.worst_monotonicity = 0.0;
  out.monotone = out.worst_monotonicity >= -10.0 * cfg.newton_tol;
  for (std::size_t i = 0; i + 1 < out.stages.size(); ++i)
    out.cauchy.push_back(
        (out.stages[i + 1].state.u.values() - out.stages[i].state.u.values()).cwiseAbs().maxCoeff());
  out.limit = out.stages.back().state.u;
  if (out.stages.size() >= 2)
    out.extrapolated = 2.0 * out.limit - out.stages[out.stages.size() - 2].state.u;
  else
    out.extrapolated = out.limit;
  return out;
}

// ---------------------------------------------------------------------------

ConeLabel gradient_term_label(const Eigen::VectorXd& grad, int k) {
  Eigen::MatrixXd m = -grad * grad.transpose();
  m.diagonal().array() += 0.5 * grad.squaredNorm();
  return cone_test(SymMatrix::from_dense(m), k);
}

ShrinkResult shrink_to_strict(const SpaceTimeField& u, double eps, int k) {
  const GridGeometry& g = u.geometry();
  if (k < 1 || 2 * k > g.n())
    throw DomainError("shrink_to_strict: 2k <= n violated (n = " + std::to_string(g.n()) + ", k = " +
                      std::to_string(k) + "); |du|^2/2 g - du (x) du leaves the closed cone");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("shrink_to_strict: eps must lie in (0, 1)");
  SpaceTimeField w = SpaceTimeField::from_function(g, [](double t, const Eigen::VectorXd&) { return t * t; });
  w = (1.0 - eps) * u + eps * w;

  ShrinkResult out{w, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};
  const double expo = 1.0 / (k + 1.0);
  for (int j = 1; j <= g.Nt(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) {
      const PointDerivs dw = derivatives_at(out.w, j, s);
      const SymMatrix aw = schouten_from(g.lambda0(), dw.grad, dw.hess);
      const BlockMatrix rw(dw.utt, dw.grad_ut, aw);
      out.cone_margin = std::min(out.cone_margin, cone_test(aw, k).margin);
      const double fw = eval_Fk(rw, k);
      out.fk_min = std::min(out.fk_min, fw);
      const PointDerivs du = derivatives_at(u, j, s);
      const BlockMatrix ru(du.utt, du.grad_ut, schouten_from(g.lambda0(), du.grad, du.hess));
      const double fu = std::max(0.0, eval_Fk(ru, k));
      const double slack = std::pow(std::max(0.0, fw), expo) - (1.0 - eps) * std::pow(fu, expo);
      out.concavity_slack = std::min(out.concavity_slack, slack);
    }
  return out;
}

UniquenessReport uniqueness_probe(const SpaceTimeField& ua, const SpaceTimeField& ub) {
  if (ua.geometry() != ub.geometry()) throw DomainError("uniqueness_probe: geometries differ");
  const GridGeometry& g = ua.geometry();
  UniquenessReport out;
  for (int j = 0; j < g.levels(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) {
      const double d = std::abs(ua(j, s) - ub(j, s));
      if (d > out.sup_gap) {
        out.sup_gap = d;
        out.level = j;
        out.s = s;
      }
    }
  return out;
}

}  // namespace gseq
