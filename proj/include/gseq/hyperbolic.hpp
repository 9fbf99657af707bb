// The block operator F_k(R) = r00 sigma_k(r) - <T_{k-1}(r), x x^T> and the
// real-rootedness / interlacing / concavity checks built on it.
#pragma once

#include <Eigen/Dense>

#include "gseq/poly.hpp"
#include "gseq/symk.hpp"

namespace gseq {

/// Symmetric (n+1)x(n+1) matrix [[r00, x^T], [x, r]].
struct BlockMatrix {
  double r00 = 0.0;
  Eigen::VectorXd x;
  SymMatrix r;

  BlockMatrix(double r00_, Eigen::VectorXd x_, SymMatrix r_);
  static BlockMatrix identity(int n);
  static BlockMatrix from_full(const SymMatrix& full);

  int n() const { return r.dim(); }
  SymMatrix assemble() const;
  /// R + t I_{n+1}
  BlockMatrix shifted(double t) const;
  /// tau * a + (1 - tau) * b
  static BlockMatrix blend(const BlockMatrix& a, const BlockMatrix& b, double tau);
};

double eval_Fk(const BlockMatrix& R, int k);

/// Membership in S = {R : r in Gamma_k^+, F_k(R) > 0}.
bool in_S(const BlockMatrix& R, int k);

/// t -> sigma_k(r + tI) from sigma_{k-m}(r) C(n-k+m, m).
RealPoly shifted_sigma_poly(const SymMatrix& r, int k);
/// Same polynomial as the (n-k)-th derivative of prod (t + r_j) over (n-k)!.
RealPoly shifted_sigma_poly_via_derivative(const SymMatrix& r, int k);

/// q_{i,k}(t) = sum_j (-1)^j sigma_{k-1-j}(r + tI) (t + r_i)^j where r_i is
/// the i-th eigenvalue of r in ascending order.
RealPoly q_poly(const SymMatrix& r, int i, int k);
/// Same polynomial from the (n-k)-th derivative of prod_{j != i} (t + r_j).
RealPoly q_poly_via_derivative(const SymMatrix& r, int i, int k);

/// p_{k+1}(t) = F_k(R + tI).
RealPoly p_poly(const BlockMatrix& R, int k);

struct CertReport {
  bool real_rooted = false;
  bool interlaced = false;
  bool localized = false;       // interior roots 2 <= i <= k-1 (1-based)
  bool localized_wide = false;  // interior roots 2 <= i <= k
  double max_imag_rel = 0.0;
  double interlace_slack = 0.0;
  double localize_slack = 0.0;
  double localize_wide_slack = 0.0;
  double leading_coeff = 0.0;  // measured leading coefficient of p_{k+1}
  double concavity_slack_min = 0.0;
  long samples = 1;

  bool all_true() const { return real_rooted && interlaced && localized && localized_wide; }
};

/// Checks real-rootedness of p_{k+1}, its interlacing by the roots of
/// sigma_k(r + tI), and localization of its interior roots in
/// [min(-r_j), max(-r_j)]. Failures are report fields.
CertReport certify_theorem(const BlockMatrix& R, int k, double tol = 1e-8);

struct ConcavityResult {
  double worst_slack = 0.0;  // min over tau of G(blend) - chord, G = F_k^(1/(k+1))
  double scale = 1.0;
  bool segment_in_S = true;
  double worst_segment_F = 0.0;  // min F_k along the segment
};

/// Samples tau on a uniform grid of `samples` points in [0, 1] plus the
/// midpoint. Throws DomainError when an endpoint is outside S.
ConcavityResult concavity_probe(const BlockMatrix& a, const BlockMatrix& b, int k, int samples = 33);

struct Slack {
  double value = 0.0;
  double scale = 1.0;
};

/// <T_{k-1}(E), |g|^2/2 I - g g^T> - (n-2k)(n-k+1)/(2n) sigma_{k-1}(E) |g|^2,
/// for n >= 2k and E in Gamma_k^+.
Slack lem2_slack(const SymMatrix& e, const Eigen::VectorXd& g, int k);

/// Smallest eigenvalue of T_{k-1}(A) Ric - (n-1) sigma_k(A) I with
/// Ric = (n-2) A + sigma_1(A) I, for n = 2k and A in Gamma_k^+.
Slack andrews_matrix_slack(const SymMatrix& a, int k);

}  // namespace gseq
