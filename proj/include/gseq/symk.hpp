// Elementary symmetric functions, Newton transforms and the Garding cone.
//
// Index conventions: eigenvalue and coordinate indices are zero-based.
// sigma_k with k = 0 is 1 and sigma_k with k > n is 0 where a formula needs it.
#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gseq {

/// Raised when an operation is called outside its mathematical domain
/// (index out of range, point outside a required cone, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Default relative tolerance for identity checks.
inline constexpr double kIdentityTol = 1e-10;

/// |a - b| / max(1, |a|, |b|).
double relative_gap(double a, double b);

/// Eigenvalue vector. Non-empty and finite.
class EigenList {
 public:
  explicit EigenList(std::vector<double> values);
  EigenList(std::initializer_list<double> values);
  explicit EigenList(const Eigen::VectorXd& values);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Symmetric matrix. Storage is kept exactly symmetric: every write goes to
/// both (i, j) and (j, i), and dense input is symmetrized by averaging.
class SymMatrix {
 public:
  explicit SymMatrix(int n);
  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::span<const double> diag);
  static SymMatrix from_dense(const Eigen::MatrixXd& m);
  /// p p^T
  static SymMatrix outer(const Eigen::VectorXd& p);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v);
  const Eigen::MatrixXd& dense() const { return m_; }

  EigenList eigenvalues() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double c);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }

 private:
  Eigen::MatrixXd m_;
};

/// Frobenius pairing <A, B> = tr(A B).
double frob(const SymMatrix& a, const SymMatrix& b);
/// x^T A x
double quad(const SymMatrix& a, const Eigen::VectorXd& x);

/// All sigma_0 .. sigma_n of lam, from the coefficients of prod_i (t + lam_i).
std::vector<double> elementary_symmetric_all(std::span<const double> lam);

double sigma_k(const EigenList& lam, int k);
double sigma_k(const SymMatrix& s, int k);

/// sigma_k of lam with lam_i removed (sigma_k(lam | i)).
double sigma_k_partial(const EigenList& lam, int k, int i);

/// T_k(S) = sigma_k(S) I - sigma_{k-1}(S) S + ... + (-1)^k S^k, 0 <= k <= n-1.
SymMatrix newton_transform(const SymMatrix& s, int k);

/// Spectral data of a symmetric matrix reused by several pointwise formulas:
/// eigenpairs, all sigma_j, and T_{k-1} in the eigenbasis.
struct Spectral {
  Eigen::VectorXd lam;
  Eigen::MatrixXd vecs;
  std::vector<double> sigma;  // sigma_0 .. sigma_n

  explicit Spectral(const SymMatrix& s);
  /// T_j(S) rebuilt from the eigenbasis, 0 <= j <= n-1.
  Eigen::MatrixXd newton(int j) const;
};

struct ConeLabel {
  int k = 0;
  bool inside = false;
  double margin = 0.0;  // min_{1<=j<=k} sigma_j
};

ConeLabel cone_test(const EigenList& lam, int k);
ConeLabel cone_test(const SymMatrix& s, int k);
/// Margin from precomputed sigma_0..sigma_n.
ConeLabel cone_label_from_sigma(std::span<const double> sigma, int k);

/// Signed slacks (rhs - lhs) of the Newton, MacLaurin and generalized
/// Newton-MacLaurin inequalities, each paired with the magnitude it is
/// measured against.
struct InequalitySlacks {
  std::optional<double> newton;  // at index k, present when 1 <= k <= n-1
  double newton_scale = 1.0;
  double maclaurin = 0.0;  // (sigma_l/C(n,l))^(1/l) - (sigma_k/C(n,k))^(1/k), needs l >= 1
  double maclaurin_scale = 1.0;
  double generalized = 0.0;  // ratio form with (k, l) against (r, s)
  double generalized_scale = 1.0;
};

/// Requires lam in Gamma_k^+, k > l >= 0, r > s >= 0, k >= r, l >= s.
/// The MacLaurin slack uses (k, max(l, 1)).
InequalitySlacks inequality_suite(const EigenList& lam, int k, int l, int r, int s);

struct RankOneIdentity {
  double sigma_lhs;  // sigma_k(A - X X^T)
  double sigma_rhs;  // sigma_k(A) - <T_{k-1}(A), X X^T>
  std::optional<double> newton_lhs;  // <T_k(A - X X^T), X X^T>, k <= n-1
  std::optional<double> newton_rhs;  // <T_k(A), X X^T>
  double scale;
};

/// Both sides of the rank-one update identities, 1 <= k <= n.
RankOneIdentity rank_one_identity(const SymMatrix& a, const Eigen::VectorXd& x, int k);

struct ELift {
  ConeLabel label;
  std::vector<double> chain;  // sigma_1(E) .. sigma_k(E)
};

/// Cone label of E = utt A - p p^T for A in Gamma_k^+ and utt > 0.
ELift e_cone_lift(const SymMatrix& a, double utt, const Eigen::VectorXd& p, int k);

/// Binomial coefficient as a double.
double binomial(int n, int k);

}  // namespace gseq
