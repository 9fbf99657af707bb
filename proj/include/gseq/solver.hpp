// Damped Newton for F_k(u) = f with Dirichlet data in t, the continuity path
// from the explicit subsolution, the degenerate sweep f = s -> 0, the strict
// perturbation w = (1 - eps) u + eps t^2 and the uniqueness probe.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gseq/grid.hpp"

namespace gseq {

struct SolverConfig {
  double newton_tol = 1e-10;  // relative to sup f
  int max_newton = 50;
  double armijo_ratio = 0.5;
  double armijo_slope = 1e-4;
  double margin_floor = 1e-12;
  int path_steps = 10;
  std::vector<double> s_schedule = default_schedule();
  double linear_tol = 1e-12;
  int gmres_restart = 60;
  int gmres_max_iters = 600;
  std::string linear_solver = "gmres";  // "gmres" (ILUT-preconditioned, LU fallback) or "direct"
  bool verbose = false;

  /// 1, 1/2, ..., 2^-16
  static std::vector<double> default_schedule(int last_exponent = 16);
  void validate() const;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // sup-norm over interior, one entry per iterate
  double target = 0.0;                   // newton_tol * sup f
  double roundoff_floor = 0.0;           // evaluation noise level of the final residual
  bool floor_limited = false;            // converged on the roundoff floor rather than the target
  AdmissibilityReport margins;
  int line_search_shrinks = 0;
  int linear_fallbacks = 0;
  std::string diagnosis;
  double wall_time = 0.0;  // seconds; kept out of to_json for determinism

  std::string to_json() const;
};

struct SolveState {
  SpaceTimeField u;
  SpaceTimeField f;
  double residual_norm = 0.0;
  int step = 0;
};

struct SolveOutcome {
  SolveState state;
  SolveReport report;
};

/// Sup-norm of the residual over interior levels.
double residual_sup(const SpaceTimeField& u, const SpaceTimeField& f);
/// Max of |f| over interior levels.
double interior_sup(const SpaceTimeField& f);
double interior_min(const SpaceTimeField& f);

/// Requires an admissible start with F_k(u_init) > 0 and f > 0 on interior
/// levels; the boundary levels of u_init are the Dirichlet data.
SolveOutcome newton_solve(const SpaceTimeField& u_init, const SpaceTimeField& f, const SolverConfig& cfg);

struct ContinuityOutcome {
  SolveState state;
  SolveReport report;  // report of the final Newton call, iterations summed
  double a = 0.0;      // subsolution constant: w = U_{-a}
  int newton_calls = 0;
  int halvings = 0;
  std::vector<double> path;  // accepted s values
};

/// Smallest a in {1, 2, 4, ...} with F_k(U_{-a}) > max f on interior levels.
double subsolution_constant(const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                            const SpaceTimeField& f_target);

ContinuityOutcome continuity_solve(const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                                   const SpaceTimeField& f_target, const SolverConfig& cfg);

struct SweepStage {
  double s = 0.0;
  SolveState state;
  SolveReport report;
};

struct SweepResult {
  explicit SweepResult(const GridGeometry& g) : limit(g), extrapolated(g) {}

  std::vector<SweepStage> stages;
  double a = 0.0;
  bool monotone = true;
  double worst_monotonicity = 0.0;  // min over s <= s~ of min(u^s - u^s~)
  std::vector<double> cauchy;       // sup|u^{s_i} - u^{s_{i+1}}|
  SpaceTimeField limit;             // last stage
  SpaceTimeField extrapolated;      // 2 u^{s_last} - u^{s_prev}
  bool converged = true;

  std::string to_json() const;
};

SweepResult degenerate_sweep(const GridGeometry& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1,
                             const SolverConfig& cfg);

/// Gamma_k^+ label of |g|^2/2 I - g g^T (in the closure when 2k <= n).
ConeLabel gradient_term_label(const Eigen::VectorXd& grad, int k);

struct ShrinkResult {
  SpaceTimeField w;
  double cone_margin = 0.0;      // min Gamma_k^+ margin of A_w
  double fk_min = 0.0;           // min F_k(w)
  double concavity_slack = 0.0;  // min of F_k^(1/(k+1))(w) - (1 - eps) F_k^(1/(k+1))(u)
  bool strict() const { return cone_margin > 0.0 && fk_min > 0.0; }
};

/// w = (1 - eps) u + eps t^2. Throws DomainError when 2k > n or eps outside (0, 1).
ShrinkResult shrink_to_strict(const SpaceTimeField& u, double eps, int k);

struct UniquenessReport {
  double sup_gap = 0.0;
  int level = 0;
  long s = 0;
};

UniquenessReport uniqueness_probe(const SpaceTimeField& ua, const SpaceTimeField& ub);

}  // namespace gseq
