#include "gseq/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gseq {

namespace {

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

void check_k(int n, int k, const char* who) {
  if (k < 1 || k > n)
    throw DomainError(std::string(who) + ": k = " + std::to_string(k) + " outside [1, n]");
}

std::vector<double> ascending_eigenvalues(const SymMatrix& r) {
  const auto ev = r.eigenvalues();
  return {ev.values().begin(), ev.values().end()};
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockMatrix

BlockMatrix::BlockMatrix(double r00_, Eigen::VectorXd x_, SymMatrix r_)
    : r00(r00_), x(std::move(x_)), r(std::move(r_)) {
  if (x.size() != r.dim()) throw DomainError("BlockMatrix: x and r dimensions disagree");
}

BlockMatrix BlockMatrix::identity(int n) {
  return BlockMatrix(1.0, Eigen::VectorXd::Zero(n), SymMatrix::identity(n));
}

BlockMatrix BlockMatrix::from_full(const SymMatrix& full) {
  const int n = full.dim() - 1;
  if (n < 1) throw DomainError("BlockMatrix: full matrix must be at least 2x2");
  const auto& m = full.dense();
  return BlockMatrix(m(0, 0), m.col(0).tail(n), SymMatrix::from_dense(m.bottomRightCorner(n, n)));
}

SymMatrix BlockMatrix::assemble() const {
  const int m = n() + 1;
  Eigen::MatrixXd full(m, m);
  full(0, 0) = r00;
  full.col(0).tail(n()) = x;
  full.row(0).tail(n()) = x.transpose();
  full.bottomRightCorner(n(), n()) = r.dense();
  return SymMatrix::from_dense(full);
}

BlockMatrix BlockMatrix::shifted(double t) const {
  return BlockMatrix(r00 + t, x, r + t * SymMatrix::identity(n()));
}

BlockMatrix BlockMatrix::blend(const BlockMatrix& a, const BlockMatrix& b, double tau) {
  return BlockMatrix(tau * a.r00 + (1.0 - tau) * b.r00, tau * a.x + (1.0 - tau) * b.x,
                     tau * a.r + (1.0 - tau) * b.r);
}

// ---------------------------------------------------------------------------
// F_k

double eval_Fk(const BlockMatrix& R, int k) {
  check_k(R.n(), k, "eval_Fk");
  const Spectral sp(R.r);
  const double pair = R.x.dot(sp.newton(k - 1) * R.x);
  return R.r00 * sp.sigma[static_cast<std::size_t>(k)] - pair;
}

bool in_S(const BlockMatrix& R, int k) {
  return cone_test(R.r, k).inside && eval_Fk(R, k) > 0.0;
}

// ---------------------------------------------------------------------------
// Polynomials in t

namespace {

RealPoly shifted_sigma_from_eigs(const std::vector<double>& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (k == 0) return RealPoly({1.0});
  const auto sig = elementary_symmetric_all(lam);
  std::vector<double> c(static_cast<std::size_t>(k + 1));
  for (int m = 0; m <= k; ++m)
    c[static_cast<std::size_t>(m)] = binomial(n - k + m, m) * sig[static_cast<std::size_t>(k - m)];
  return RealPoly(std::move(c));
}

RealPoly q_from_eigs(const std::vector<double>& lam, int i, int k) {
  const RealPoly lin({lam[static_cast<std::size_t>(i)], 1.0});
  RealPoly acc;
  RealPoly power({1.0});
  for (int j = 0; j <= k - 1; ++j) {
    acc = acc + ((j % 2 == 0) ? 1.0 : -1.0) * (shifted_sigma_from_eigs(lam, k - 1 - j) * power);
    power = power * lin;
  }
  return acc;
}

}  // namespace

RealPoly shifted_sigma_poly(const SymMatrix& r, int k) {
  check_k(r.dim(), k, "shifted_sigma_poly");
  return shifted_sigma_from_eigs(ascending_eigenvalues(r), k);
}

RealPoly shifted_sigma_poly_via_derivative(const SymMatrix& r, int k) {
  const int n = r.dim();
  check_k(n, k, "shifted_sigma_poly_via_derivative");
  const RealPoly pi = RealPoly::from_shifts(ascending_eigenvalues(r));
  return (1.0 / factorial(n - k)) * pi.derivative(n - k);
}

RealPoly q_poly(const SymMatrix& r, int i, int k) {
  const int n = r.dim();
  check_k(n, k, "q_poly");
  if (i < 0 || i >= n) throw DomainError("q_poly: eigenvalue index out of range");
  return q_from_eigs(ascending_eigenvalues(r), i, k);
}

RealPoly q_poly_via_derivative(const SymMatrix& r, int i, int k) {
  const int n = r.dim();
  check_k(n, k, "q_poly_via_derivative");
  if (i < 0 || i >= n) throw DomainError("q_poly_via_derivative: eigenvalue index out of range");
  auto lam = ascending_eigenvalues(r);
  lam.erase(lam.begin() + i);
  const RealPoly pi_i = RealPoly::from_shifts(lam);
  return (1.0 / factorial(n - k)) * pi_i.derivative(n - k);
}

RealPoly p_poly(const BlockMatrix& R, int k) {
  const int n = R.n();
  check_k(n, k, "p_poly");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R.r.dense());
  const Eigen::VectorXd xr = es.eigenvectors().transpose() * R.x;
  const std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + n);
  RealPoly p = RealPoly({R.r00, 1.0}) * shifted_sigma_from_eigs(lam, k);
  for (int i = 0; i < n; ++i) p = p - (xr(i) * xr(i)) * q_from_eigs(lam, i, k);
  return p;
}

// ---------------------------------------------------------------------------
// Certificate

CertReport certify_theorem(const BlockMatrix& R, int k, double tol) {
  const int n = R.n();
  check_k(n, k, "certify_theorem");
  CertReport rep;
  const RealPoly p = p_poly(R, k);
  rep.leading_coeff = p.leading();
  const RootList alpha = real_roots(p, tol);
  rep.max_imag_rel = alpha.max_imag_rel;
  rep.real_rooted = p.degree() == k + 1 && alpha.real_rooted();

  const RootList beta = real_roots(shifted_sigma_poly(R.r, k), tol);
  if (rep.real_rooted && beta.real_rooted()) {
    const auto il = check_interlacing(beta.roots, alpha.roots, tol);
    rep.interlaced = il.ok;
    rep.interlace_slack = il.worst_slack;
  } else {
    rep.interlace_slack = -std::numeric_limits<double>::infinity();
  }

  const auto lam = ascending_eigenvalues(R.r);
  const double lo = -lam.back();
  const double hi = -lam.front();
  auto localize = [&](int last) {
    double worst = std::numeric_limits<double>::infinity();
    if (!rep.real_rooted) return -worst;
    // 1-based indices 2..last
    for (int i = 2; i <= last; ++i) {
      const double a = alpha.roots[static_cast<std::size_t>(i - 1)];
      const double scale = 1.0 + std::max({std::abs(a), std::abs(lo), std::abs(hi)});
      worst = std::min({worst, (a - lo) / scale, (hi - a) / scale});
    }
    return worst;
  };
  rep.localize_slack = localize(k - 1);
  rep.localize_wide_slack = localize(k);
  rep.localized = rep.localize_slack >= -tol;
  rep.localized_wide = rep.localize_wide_slack >= -tol;
  return rep;
}

ConcavityResult concavity_probe(const BlockMatrix& a, const BlockMatrix& b, int k, int samples) {
  if (a.n() != b.n()) throw DomainError("concavity_probe: dimension mismatch");
  if (samples < 2) throw DomainError("concavity_probe: need at least two samples");
  if (!in_S(a, k) || !in_S(b, k)) throw DomainError("concavity_probe: endpoint outside S");
  const double ex = 1.0 / (k + 1);
  const double ga = std::pow(eval_Fk(a, k), ex);
  const double gb = std::pow(eval_Fk(b, k), ex);

  ConcavityResult out;
  out.scale = std::max({1.0, ga, gb});
  out.worst_slack = std::numeric_limits<double>::infinity();
  out.worst_segment_F = std::numeric_limits<double>::infinity();
  std::vector<double> taus;
  for (int i = 0; i < samples; ++i) taus.push_back(static_cast<double>(i) / (samples - 1));
  taus.push_back(0.5);
  for (double tau : taus) {
    const BlockMatrix m = BlockMatrix::blend(a, b, tau);
    const double f = eval_Fk(m, k);
    out.worst_segment_F = std::min(out.worst_segment_F, f);
    if (!(cone_test(m.r, k).inside && f > 0.0)) {
      out.segment_in_S = false;
      out.worst_slack = std::min(out.worst_slack, -std::numeric_limits<double>::infinity());
      continue;
    }
    const double chord = tau * ga + (1.0 - tau) * gb;
    out.worst_slack = std::min(out.worst_slack, std::pow(f, ex) - chord);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise matrix inequalities

Slack lem2_slack(const SymMatrix& e, const Eigen::VectorXd& g, int k) {
  const int n = e.dim();
  if (g.size() != n) throw DomainError("lem2_slack: dimension mismatch");
  if (k < 1 || n < 2 * k) throw DomainError("lem2_slack: requires n >= 2k");
  const Spectral sp(e);
  if (!cone_label_from_sigma(sp.sigma, k).inside) throw DomainError("lem2_slack: E is not in Gamma_k^+");
  const Eigen::MatrixXd t = sp.newton(k - 1);
  const double g2 = g.squaredNorm();
  const double iso = 0.5 * g2 * t.trace();
  const double dir = g.dot(t * g);
  const double rhs = (n - 2.0 * k) * (n - k + 1.0) / (2.0 * n) * sp.sigma[static_cast<std::size_t>(k - 1)] * g2;
  return {iso - dir - rhs, std::max({1.0, std::abs(iso), std::abs(dir), std::abs(rhs)})};
}

Slack andrews_matrix_slack(const SymMatrix& a, int k) {
  const int n = a.dim();
  if (n != 2 * k) throw DomainError("andrews_matrix_slack: requires n = 2k");
  const Spectral sp(a);
  if (!cone_label_from_sigma(sp.sigma, k).inside)
    throw DomainError("andrews_matrix_slack: A is not in Gamma_k^+");
  const Eigen::MatrixXd t = sp.newton(k - 1);
  Eigen::MatrixXd ric = (n - 2.0) * a.dense();
  ric.diagonal().array() += sp.sigma[1];
  const double sk = sp.sigma[static_cast<std::size_t>(k)];
  // T and Ric commute, so the product is symmetric up to rounding.
  Eigen::MatrixXd prod = 0.5 * (t * ric + ric * t);
  const double scale = std::max({1.0, prod.norm(), (n - 1.0) * std::abs(sk)});
  prod.diagonal().array() -= (n - 1.0) * sk;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prod, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), scale};
}

}  // namespace gseq
