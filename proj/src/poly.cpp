#include "gseq/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gseq/symk.hpp"

namespace gseq {

RealPoly::RealPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  double big = 0.0;
  for (double c : coeffs_) big = std::max(big, std::abs(c));
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-14 * big) coeffs_.pop_back();
  if (coeffs_.size() == 1 && std::abs(coeffs_[0]) == 0.0) coeffs_[0] = 0.0;
}

RealPoly RealPoly::from_shifts(const std::vector<double>& shifts) {
  RealPoly p({1.0});
  for (double s : shifts) p = p * RealPoly({s, 1.0});
  return p;
}

double RealPoly::coeff(int i) const {
  return i >= 0 && i <= degree() ? coeffs_[static_cast<std::size_t>(i)] : 0.0;
}

double RealPoly::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

RealPoly RealPoly::derivative(int m) const {
  std::vector<double> c = coeffs_;
  for (int step = 0; step < m; ++step) {
    if (c.size() <= 1) return RealPoly({0.0});
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    c = std::move(d);
  }
  return RealPoly(std::move(c));
}

RealPoly operator+(const RealPoly& a, const RealPoly& b) {
  std::vector<double> c(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return RealPoly(std::move(c));
}

RealPoly operator-(const RealPoly& a, const RealPoly& b) { return a + (-1.0) * b; }

RealPoly operator*(const RealPoly& a, const RealPoly& b) {
  std::vector<double> c(static_cast<std::size_t>(a.degree() + b.degree() + 1), 0.0);
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) c[static_cast<std::size_t>(i + j)] += a.coeff(i) * b.coeff(j);
  return RealPoly(std::move(c));
}

RealPoly operator*(double c, const RealPoly& a) {
  std::vector<double> out = a.coeffs();
  for (double& x : out) x *= c;
  return RealPoly(std::move(out));
}

namespace {

// Diagonal similarity scaling by powers of two so that row and column norms
// are comparable (Parlett-Reinsch).
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> complex_roots(const RealPoly& p) {
  const int d = p.degree();
  if (d < 1) throw DomainError("real_roots: polynomial has degree 0");
  if (d == 1) return {std::complex<double>(-p.coeff(0) / p.coeff(1), 0.0)};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.coeff(i) / p.leading();
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

RootList real_roots(const RealPoly& p, double tol) {
  const auto all = complex_roots(p);
  RootList out;
  out.degree = p.degree();
  const RealPoly dp = p.derivative();
  for (const auto& z : all) {
    const double im = std::abs(z.imag());
    out.max_imag = std::max(out.max_imag, im);
    out.max_imag_rel = std::max(out.max_imag_rel, im / (1.0 + std::abs(z)));
    if (im <= tol * std::max(1.0, std::abs(z))) {
      // One guarded Newton polish on the real part.
      double x = z.real();
      const double fx = p(x), dfx = dp(x);
      if (dfx != 0.0) {
        const double y = x - fx / dfx;
        if (std::isfinite(y) && std::abs(p(y)) < std::abs(fx) && std::abs(y - x) <= 1e-6 * (1.0 + std::abs(x)))
          x = y;
      }
      out.roots.push_back(x);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

InterlaceResult check_interlacing(const std::vector<double>& g, const std::vector<double>& f, double tol) {
  const auto dg = static_cast<long>(g.size());
  const auto df = static_cast<long>(f.size());
  if (dg > df || df - dg > 1)
    throw DomainError("check_interlacing: need deg g == deg f or deg f == deg g + 1");
  // Merge into the required ascending chain.
  std::vector<double> chain;
  chain.reserve(g.size() + f.size());
  if (dg == df) {
    for (long i = 0; i < df; ++i) {
      chain.push_back(g[static_cast<std::size_t>(i)]);
      chain.push_back(f[static_cast<std::size_t>(i)]);
    }
  } else {
    for (long i = 0; i < df; ++i) {
      chain.push_back(f[static_cast<std::size_t>(i)]);
      if (i < dg) chain.push_back(g[static_cast<std::size_t>(i)]);
    }
  }
  InterlaceResult out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const double scale = 1.0 + std::max(std::abs(chain[i]), std::abs(chain[i - 1]));
    out.worst_slack = std::min(out.worst_slack, (chain[i] - chain[i - 1]) / scale);
  }
  out.ok = out.worst_slack >= -tol;
  return out;
}

}  // namespace gseq
