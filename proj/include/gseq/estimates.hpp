// Empirical checks of the a priori bounds on solved states: C0 sandwich
// between U_{-a} and U_0, the u_t bounds, the E-cone lift, and measured
// suprema of the C^{1,1} quantities.
#pragma once

#include <string>
#include <vector>

#include "gseq/analytic.hpp"
#include "gseq/solver.hpp"

namespace gseq {

struct C0Slacks {
  double low = 0.0;   // min(u - U_{-a})
  double high = 0.0;  // min(U_0 - u)
};
C0Slacks verify_c0(const SpaceTimeField& u, double a);

struct UtSlacks {
  double low = 0.0;   // min(u_t - (u1 - u0 - a))
  double high = 0.0;  // min((u1 - u0 + a) - u_t)
};
/// Central u_t inside, second-order one-sided at the boundary levels.
UtSlacks verify_ut(const SpaceTimeField& u, double a);

struct ECone {
  double margin = 0.0;      // min over interior of min_{j<=k} sigma_j(E_u)
  double chain_min = 0.0;   // min of u_tt sigma_1(A_u) - |grad u_t|^2
};
ECone verify_e_cone(const SpaceTimeField& u);

struct Suprema {
  double grad = 0.0;     // |grad u|, all levels
  double utt = 0.0;      // u_tt, interior
  double hess = 0.0;     // spectral norm of grad^2 u, all levels
  double grad_ut = 0.0;  // |grad u_t|, interior
};
Suprema measure_suprema(const SpaceTimeField& u);

struct BoundReport {
  C0Slacks c0;
  UtSlacks ut;
  ECone e_cone;
  Suprema sup;
  double utt_min = 0.0;  // convexity in t

  bool holds(double tol) const;
  std::string to_json() const;
};

BoundReport verify_bounds(const SpaceTimeField& u, double a);

/// Boundary data and constant right-hand side; geometry chosen per resolution
/// with Nt = N - 1.
struct Problem {
  int n = 2;
  int k = 1;
  double L = 2.0 * M_PI;
  double lambda0 = 0.5;
  SliceSpec u0;
  SliceSpec u1;
  double f = 1.0;

  GridGeometry geometry(int N) const { return GridGeometry(n, k, N, N - 1, L, lambda0); }
};

struct RefinementRow {
  int N = 0;
  int Nt = 0;
  bool converged = false;
  double a = 0.0;
  BoundReport bounds;
};

struct RefinementStudy {
  std::vector<RefinementRow> rows;
  /// Largest |S_{i+1} - S_i| / max(S_i, S_{i+1}) over successive rows and
  /// the four suprema.
  double max_relative_variation() const;
  std::string to_csv() const;
  std::string to_json() const;
};

RefinementStudy refinement_study(const Problem& problem, const std::vector<int>& resolutions, const SolverConfig& cfg);

}  // namespace gseq
