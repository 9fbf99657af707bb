#include "gseq/symk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gseq {

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// ---------------------------------------------------------------------------
// EigenList

namespace {

void check_finite(std::span<const double> v) {
  if (v.empty()) throw DomainError("EigenList: dimension must be at least 1");
  for (double x : v)
    if (!std::isfinite(x)) throw DomainError("EigenList: non-finite entry");
}

}  // namespace

EigenList::EigenList(std::vector<double> values) : values_(std::move(values)) {
  check_finite(values_);
}

EigenList::EigenList(std::initializer_list<double> values) : values_(values) {
  check_finite(values_);
}

EigenList::EigenList(const Eigen::VectorXd& values)
    : values_(values.data(), values.data() + values.size()) {
  check_finite(values_);
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(int n) : m_(Eigen::MatrixXd::Zero(n, n)) {
  if (n < 1) throw DomainError("SymMatrix: dimension must be at least 1");
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix s(n);
  s.m_.setIdentity();
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix s(static_cast<int>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) s.m_(i, i) = diag[i];
  return s;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("SymMatrix: matrix is not square");
  SymMatrix s(static_cast<int>(m.rows()));
  s.m_ = 0.5 * (m + m.transpose());
  return s;
}

SymMatrix SymMatrix::outer(const Eigen::VectorXd& p) {
  SymMatrix s(static_cast<int>(p.size()));
  s.m_ = p * p.transpose();
  return s;
}

void SymMatrix::set(int i, int j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

EigenList SymMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
  return EigenList(Eigen::VectorXd(es.eigenvalues()));
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw DomainError("SymMatrix: dimension mismatch");
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim() != dim()) throw DomainError("SymMatrix: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  m_ *= c;
  return *this;
}

double frob(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("frob: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

double quad(const SymMatrix& a, const Eigen::VectorXd& x) {
  if (a.dim() != x.size()) throw DomainError("quad: dimension mismatch");
  return x.dot(a.dense() * x);
}

// ---------------------------------------------------------------------------
// sigma_k

std::vector<double> elementary_symmetric_all(std::span<const double> lam) {
  // e[j] accumulates sigma_j of the prefix; this is the coefficient
  // convolution of prod (t + lam_i) read from the top degree down.
  std::vector<double> e(lam.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < lam.size(); ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += lam[i] * e[j - 1];
  return e;
}

double sigma_k(const EigenList& lam, int k) {
  if (k < 0 || k > lam.size())
    throw DomainError("sigma_k: k = " + std::to_string(k) + " outside [0, " +
                      std::to_string(lam.size()) + "]");
  if (k == 0) return 1.0;
  return elementary_symmetric_all(lam.values())[static_cast<std::size_t>(k)];
}

double sigma_k(const SymMatrix& s, int k) { return sigma_k(s.eigenvalues(), k); }

double sigma_k_partial(const EigenList& lam, int k, int i) {
  const int n = lam.size();
  if (i < 0 || i >= n)
    throw DomainError("sigma_k_partial: index " + std::to_string(i) + " out of range");
  if (k < 0 || k > n - 1)
    throw DomainError("sigma_k_partial: k = " + std::to_string(k) + " outside [0, n-1]");
  if (k == 0) return 1.0;
  std::vector<double> rest;
  rest.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j < n; ++j)
    if (j != i) rest.push_back(lam[j]);
  return elementary_symmetric_all(rest)[static_cast<std::size_t>(k)];
}

// ---------------------------------------------------------------------------
// Newton transform

SymMatrix newton_transform(const SymMatrix& s, int k) {
  const int n = s.dim();
  if (k < 0 || k > n - 1)
    throw DomainError("newton_transform: k = " + std::to_string(k) + " outside [0, n-1]");
  // Eigenbasis form; the Horner recursion T_j = sigma_j I - S T_{j-1} cancels badly for large j.
  return SymMatrix::from_dense(Spectral(s).newton(k));
}

Spectral::Spectral(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.dense());
  lam = es.eigenvalues();
  vecs = es.eigenvectors();
  sigma = elementary_symmetric_all(std::span<const double>(lam.data(), lam.size()));
}

Eigen::MatrixXd Spectral::newton(int j) const {
  const int n = static_cast<int>(lam.size());
  Eigen::VectorXd d(n);
  std::vector<double> rest(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    for (int a = 0, b = 0; a < n; ++a)
      if (a != i) rest[static_cast<std::size_t>(b++)] = lam(a);
    d(i) = j == 0 ? 1.0 : elementary_symmetric_all(rest)[static_cast<std::size_t>(j)];
  }
  return vecs * d.asDiagonal() * vecs.transpose();
}

// ---------------------------------------------------------------------------
// Cone

ConeLabel cone_label_from_sigma(std::span<const double> sigma, int k) {
  const int n = static_cast<int>(sigma.size()) - 1;
  if (k < 1 || k > n)
    throw DomainError("cone_test: k = " + std::to_string(k) + " outside [1, n]");
  ConeLabel label;
  label.k = k;
  label.margin = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= k; ++j) label.margin = std::min(label.margin, sigma[static_cast<std::size_t>(j)]);
  label.inside = label.margin > 0.0;
  return label;
}

ConeLabel cone_test(const EigenList& lam, int k) {
  return cone_label_from_sigma(elementary_symmetric_all(lam.values()), k);
}

ConeLabel cone_test(const SymMatrix& s, int k) { return cone_test(s.eigenvalues(), k); }

// ---------------------------------------------------------------------------
// Inequalities

InequalitySlacks inequality_suite(const EigenList& lam, int k, int l, int r, int s) {
  const int n = lam.size();
  if (!(k > l && l >= 0 && r > s && s >= 0 && k >= r && l >= s))
    throw DomainError("inequality_suite: need k > l >= 0, r > s >= 0, k >= r, l >= s");
  if (k > n) throw DomainError("inequality_suite: k exceeds dimension");
  const auto sig = elementary_symmetric_all(lam.values());
  if (!cone_label_from_sigma(sig, k).inside)
    throw DomainError("inequality_suite: eigenvalues are not in Gamma_k^+");

  auto sg = [&](int j) { return j >= 0 && j <= n ? sig[static_cast<std::size_t>(j)] : 0.0; };
  auto normalized = [&](int j) { return sg(j) / binomial(n, j); };

  InequalitySlacks out;
  if (k <= n - 1) {
    const double lhs = (n - k + 1.0) * (k + 1.0) * sg(k - 1) * sg(k + 1);
    const double rhs = k * (n - k) * sg(k) * sg(k);
    out.newton = rhs - lhs;
    out.newton_scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  }

  const int lm = std::max(l, 1);
  if (k > lm) {
    const double lhs = std::pow(normalized(k), 1.0 / k);
    const double rhs = std::pow(normalized(lm), 1.0 / lm);
    out.maclaurin = rhs - lhs;
    out.maclaurin_scale = std::max({1.0, lhs, rhs});
  }

  const double lhs = std::pow(normalized(k) / normalized(l), 1.0 / (k - l));
  const double rhs = std::pow(normalized(r) / normalized(s), 1.0 / (r - s));
  out.generalized = rhs - lhs;
  out.generalized_scale = std::max({1.0, lhs, rhs});
  return out;
}

// ---------------------------------------------------------------------------
// Rank-one update and the E-cone

RankOneIdentity rank_one_identity(const SymMatrix& a, const Eigen::VectorXd& x, int k) {
  const int n = a.dim();
  if (x.size() != n) throw DomainError("rank_one_identity: dimension mismatch");
  if (k < 1 || k > n) throw DomainError("rank_one_identity: k outside [1, n]");
  const SymMatrix xx = SymMatrix::outer(x);
  const SymMatrix shifted = a - xx;

  RankOneIdentity out;
  out.sigma_lhs = sigma_k(shifted, k);
  const double sa = sigma_k(a, k);
  const double pair = frob(newton_transform(a, k - 1), xx);
  out.sigma_rhs = sa - pair;
  out.scale = std::max({1.0, std::abs(sa), std::abs(pair)});
  if (k <= n - 1) {
    out.newton_lhs = frob(newton_transform(shifted, k), xx);
    out.newton_rhs = frob(newton_transform(a, k), xx);
    out.scale = std::max({out.scale, std::abs(*out.newton_lhs), std::abs(*out.newton_rhs)});
  }
  return out;
}

ELift e_cone_lift(const SymMatrix& a, double utt, const Eigen::VectorXd& p, int k) {
  if (!(utt > 0.0)) throw DomainError("e_cone_lift: utt must be positive");
  if (!cone_test(a, k).inside) throw DomainError("e_cone_lift: A is not in Gamma_k^+");
  SymMatrix e = utt * a;
  e -= SymMatrix::outer(p);
  const auto sig = elementary_symmetric_all(e.eigenvalues().values());
  ELift out;
  out.label = cone_label_from_sigma(sig, k);
  out.chain.assign(sig.begin() + 1, sig.begin() + 1 + k);
  return out;
}

}  // namespace gseq
