// Closed-form fields: boundary-data families and manufactured solutions
// u(t, x) = P_0(t) + sum_m P_m(t) cos(2 pi w_m . x / L + phase_m).
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "gseq/grid.hpp"
#include "gseq/poly.hpp"

namespace gseq {

struct CosineMode {
  double amplitude = 0.0;
  std::vector<int> wave;  // integer wave vector, one entry per axis
  double phase = 0.0;
};

/// Spatial boundary slice: constant + sum of cosine modes.
struct SliceSpec {
  double constant = 0.0;
  std::vector<CosineMode> modes;

  static SliceSpec flat(double c) { return {c, {}}; }
  /// amplitude * cos(2 pi x_axis / L), axis zero-based.
  static SliceSpec cosine(double amplitude, int axis, int n, int mode = 1);

  double eval(const Eigen::VectorXd& x, double L) const;
  Eigen::VectorXd sample(const GridGeometry& g) const;
};

class AnalyticField {
 public:
  struct Term {
    RealPoly coeff;
    std::vector<int> wave;
    double phase = 0.0;
  };

  AnalyticField(int n, double L, RealPoly base, std::vector<Term> terms = {});

  /// Exact jet (u, u_t, u_tt, grad, grad_ut, hess) at (t, x).
  PointDerivs jet(double t, const Eigen::VectorXd& x) const;
  double value(double t, const Eigen::VectorXd& x) const;

  SpaceTimeField sample(const GridGeometry& g) const;
  /// F_k of the exact jet at every grid point (boundary levels included).
  SpaceTimeField fk(const GridGeometry& g) const;
  /// Exact A_u at (t, x).
  SymMatrix schouten(double t, const Eigen::VectorXd& x, double lambda0) const;

  int n() const { return n_; }

 private:
  int n_;
  double L_;
  RealPoly base_;
  std::vector<Term> terms_;
};

/// Smooth admissible test solution used by refinement studies:
/// t^2 + 0.1 (1 + t) cos x_1 + 0.05 t^2 cos(x_1 + x_2) style terms on a box
/// of length L (axes beyond the second only enter through the base).
AnalyticField manufactured_solution(int n, double L, double amplitude = 0.1);

}  // namespace gseq
