// Finite-difference discretization of the space-time cylinder [0, 1] x (periodic
// box)^n with constant background Schouten tensor lambda0 * I.
//
// Layout: time level outermost, then spatial indices row-major with x_1
// slowest. Levels 0 and Nt + 1 carry the boundary data u0, u1.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <string>
#include <vector>

#include "gseq/symk.hpp"

namespace gseq {

class GridGeometry {
 public:
  GridGeometry(int n, int k, int N, int Nt, double L = 2.0 * M_PI, double lambda0 = 0.5);

  int n() const { return n_; }
  int k() const { return k_; }
  int N() const { return N_; }
  int Nt() const { return Nt_; }
  double L() const { return L_; }
  double lambda0() const { return lambda0_; }
  double hx() const { return L_ / N_; }
  double ht() const { return 1.0 / (Nt_ + 1); }

  int levels() const { return Nt_ + 2; }
  long spatial_size() const { return spatial_; }
  long size() const { return spatial_ * levels(); }
  long interior_size() const { return spatial_ * Nt_; }

  double t(int level) const { return level * ht(); }
  /// Grid coordinates of a spatial index.
  std::vector<int> coords(long s) const;
  Eigen::VectorXd position(long s) const;
  long spatial_index(const std::vector<int>& c) const;
  /// Periodic neighbor of s along `axis` at signed offset.
  long neighbor(long s, int axis, int offset) const;
  long stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  bool operator==(const GridGeometry& o) const;
  bool operator!=(const GridGeometry& o) const { return !(*this == o); }

 private:
  int n_, k_, N_, Nt_;
  double L_, lambda0_;
  long spatial_;
  std::vector<long> strides_;
};

class SpaceTimeField {
 public:
  explicit SpaceTimeField(GridGeometry g);
  SpaceTimeField(GridGeometry g, Eigen::VectorXd values);
  /// Samples fn(t, x) at every grid point.
  static SpaceTimeField from_function(const GridGeometry& g,
                                      const std::function<double(double, const Eigen::VectorXd&)>& fn);
  static SpaceTimeField constant(const GridGeometry& g, double c);

  const GridGeometry& geometry() const { return g_; }
  double operator()(int level, long s) const { return v_[level * g_.spatial_size() + s]; }
  double& operator()(int level, long s) { return v_[level * g_.spatial_size() + s]; }
  const Eigen::VectorXd& values() const { return v_; }
  Eigen::VectorXd& values() { return v_; }

  Eigen::VectorXd level(int j) const;
  void set_level(int j, const Eigen::VectorXd& slice);

  /// Interior levels 1..Nt stacked into one vector, and back.
  Eigen::VectorXd interior() const;
  void set_interior(const Eigen::VectorXd& x);

  double sup_abs() const { return v_.cwiseAbs().maxCoeff(); }
  bool finite() const { return v_.allFinite(); }

 private:
  GridGeometry g_;
  Eigen::VectorXd v_;
};

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator*(double c, const SpaceTimeField& a);

/// Finite-difference jet at an interior point (central in t and x).
struct PointDerivs {
  double u = 0.0;
  double ut = 0.0;
  double utt = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd grad_ut;
  Eigen::MatrixXd hess;
};

PointDerivs derivatives_at(const SpaceTimeField& u, int level, long s);

/// A_u = lambda0 I + hess + grad grad^T - |grad|^2/2 I.
SymMatrix schouten_from(double lambda0, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess);
/// Schouten tensor at any grid point, boundary levels included.
SymMatrix schouten_at(const SpaceTimeField& u, int level, long s);

struct PointState {
  double utt = 0.0;
  Eigen::VectorXd grad_ut;
  SymMatrix A{1};
  SymMatrix E{1};  // utt A - grad_ut grad_ut^T
  ConeLabel admissible;  // Gamma_k^+ label of A
  double F = 0.0;        // utt sigma_k(A) - <T_{k-1}(A), grad_ut grad_ut^T>
};

PointState point_state(const SpaceTimeField& u, int level, long s);

/// sigma_0..sigma_n and T_{k-1}(M) by Faddeev-LeVerrier; no eigensolve.
struct SymkData {
  std::vector<double> sigma;
  Eigen::MatrixXd T;
};
SymkData symk_data(const Eigen::MatrixXd& m, int k);

/// F_k = utt sigma_k(A) - <T_{k-1}(A), p p^T>.
double fk_value(double utt, const Eigen::VectorXd& p, const Eigen::MatrixXd& A, int k);
double fk_at(const SpaceTimeField& u, int level, long s);

/// F_k(u) on interior levels, zero on the boundary levels.
SpaceTimeField fk_field(const SpaceTimeField& u);
/// F_k(u) - f on interior levels, zero on the boundary levels.
SpaceTimeField residual(const SpaceTimeField& u, const SpaceTimeField& f);

/// Coefficients of the linearization at one point:
/// L v = ctt v_tt + <M, hess v> + b . grad v + m . grad v_t.
struct PointCoefficients {
  double ctt = 0.0;
  Eigen::MatrixXd M;
  Eigen::VectorXd b;
  Eigen::VectorXd m;
  /// Second-order symbol [[ctt, m^T/2], [m/2, M]].
  Eigen::MatrixXd symbol() const;
};

/// Throws DomainError naming the point when utt <= 0 or A is outside Gamma_k^+.
PointCoefficients point_coefficients(const SpaceTimeField& u, int level, long s);

/// Jacobian of the discrete residual acting on interior unknowns. Row and
/// column r correspond to (level 1 + r / N^n, spatial r % N^n).
class LinearOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  LinearOperator(GridGeometry g, Matrix m) : g_(std::move(g)), m_(std::move(m)) {}

  const GridGeometry& geometry() const { return g_; }
  const Matrix& matrix() const { return m_; }
  long rows() const { return m_.rows(); }
  long nonzeros() const { return m_.nonZeros(); }
  /// Applies to a full field with zero boundary levels assumed; returns a
  /// field with the result on interior levels.
  SpaceTimeField apply(const SpaceTimeField& v) const;

 private:
  GridGeometry g_;
  Matrix m_;
};

LinearOperator linearize(const SpaceTimeField& u, int threads = 1);

/// L v evaluated point by point from the coefficients, boundary levels of v
/// included. Returns zero on boundary levels.
SpaceTimeField linearized_action(const SpaceTimeField& u, const SpaceTimeField& v);

struct SymbolScan {
  double min_eig = 0.0;  // min over interior of the smallest symbol eigenvalue
  int level = 0;
  long s = 0;
};
SymbolScan symbol_scan(const SpaceTimeField& u);

/// Space-time gradient (phi_t, grad phi).
struct SpaceTimeGrad {
  double dt = 0.0;
  Eigen::VectorXd dx;
};

/// Q_u(D phi, D psi) from the bilinear formula.
double q_form(const SpaceTimeField& u, int level, long s, const SpaceTimeGrad& dphi, const SpaceTimeGrad& dpsi);
/// 2 utt^(1-k) <T_{k-1}(E), Y Y^T>, Y = sqrt(utt) grad phi - phi_t grad_ut / sqrt(utt).
double q_form_square(const SpaceTimeField& u, int level, long s, const SpaceTimeGrad& dphi);

/// U_a = a t(1-t) + (1-t) u0 + t u1.
SpaceTimeField comparison_field(const GridGeometry& g, double a, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1);

struct AdmissibilityReport {
  double cone_margin = 0.0;
  int cone_level = 0;
  long cone_s = 0;
  double utt_min = 0.0;
  int utt_level = 0;
  long utt_s = 0;
  double fk_min = 0.0;
  int fk_level = 0;
  long fk_s = 0;

  double worst() const { return std::min({cone_margin, utt_min, fk_min}); }
  bool positive() const { return cone_margin > 0.0 && utt_min > 0.0 && fk_min > 0.0; }
};

AdmissibilityReport admissibility_scan(const SpaceTimeField& u);

/// Periodic spatial shift by integer offsets per axis.
SpaceTimeField spatial_shift(const SpaceTimeField& u, const std::vector<int>& offsets);
/// u - c1 t - c2 (boundary slices shift accordingly).
SpaceTimeField gauge_shift(const SpaceTimeField& u, double c1, double c2);

/// "level 3, x = (1, 0)" style label.
std::string point_name(const GridGeometry& g, int level, long s);

}  // namespace gseq
