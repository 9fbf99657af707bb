// Univariate real polynomials, companion-matrix roots and interlacing.
#pragma once

#include <complex>
#include <vector>

namespace gseq {

/// Real polynomial, coefficients in ascending degree. Leading coefficients
/// below 1e-14 * max|coeff| are trimmed on construction.
class RealPoly {
 public:
  RealPoly() : coeffs_{0.0} {}
  explicit RealPoly(std::vector<double> coeffs);
  static RealPoly constant(double c) { return RealPoly({c}); }
  /// prod_i (t + shift_i)
  static RealPoly from_shifts(const std::vector<double>& shifts);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int i) const;
  double leading() const { return coeffs_.back(); }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

  double operator()(double t) const;
  RealPoly derivative(int m = 1) const;

  friend RealPoly operator+(const RealPoly& a, const RealPoly& b);
  friend RealPoly operator-(const RealPoly& a, const RealPoly& b);
  friend RealPoly operator*(const RealPoly& a, const RealPoly& b);
  friend RealPoly operator*(double c, const RealPoly& a);

 private:
  std::vector<double> coeffs_;
};

struct RootList {
  std::vector<double> roots;  // ascending, real parts of the realized roots
  double max_imag = 0.0;      // largest |Im| over all computed roots
  double max_imag_rel = 0.0;  // largest |Im| / (1 + |root|)
  int degree = 0;

  bool real_rooted() const { return static_cast<int>(roots.size()) == degree; }
};

/// All complex roots from the eigenvalues of the balanced companion matrix.
std::vector<std::complex<double>> complex_roots(const RealPoly& p);

/// Roots with |Im| <= tol * max(1, |root|) are realized; throws DomainError
/// for degree 0.
RootList real_roots(const RealPoly& p, double tol = 1e-8);

struct InterlaceResult {
  bool ok = false;
  double worst_slack = 0.0;  // min over the chain of (upper - lower)
};

/// Weak interlacing g <= f of sorted root lists: either equal degree
/// (g1 <= f1 <= g2 <= ... <= gd <= fd) or deg f = deg g + 1
/// (f1 <= g1 <= f2 <= ... <= g_{d-1} <= f_d). Any other degree pair is a
/// DomainError.
InterlaceResult check_interlacing(const std::vector<double>& g, const std::vector<double>& f,
                                  double tol = 1e-8);

}  // namespace gseq
