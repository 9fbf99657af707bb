#include "gseq/sampling.hpp"

#include <cmath>

namespace gseq {

Rng sample_rng(std::uint64_t seed, int n, int k, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Explicit affine map of the raw 53-bit draw; std::uniform_real_distribution
// is implementation-defined and would break byte-identical reports.
double uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Eigen::VectorXd uniform_vector(Rng& rng, int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

namespace {

double gaussian(Rng& rng) {
  // Box-Muller on (0, 1]
  const double u1 = 1.0 - uniform(rng, 0.0, 1.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

SymMatrix random_symmetric(Rng& rng, int n) {
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.set(i, j, uniform(rng, -1.0, 1.0));
  return s;
}

Eigen::VectorXd random_cone_eigenvalues(Rng& rng, int n, int k, double min_margin) {
  Eigen::VectorXd lam = uniform_vector(rng, n, -1.0, 1.0);
  while (cone_test(EigenList(lam), k).margin <= min_margin) lam.array() += 0.1;
  return lam;
}

SymMatrix random_cone_matrix(Rng& rng, int n, int k, double min_margin) {
  const Eigen::VectorXd lam = random_cone_eigenvalues(rng, n, k, min_margin);
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  return SymMatrix::from_dense(q * lam.asDiagonal() * q.transpose());
}

BlockMatrix random_block(Rng& rng, int n) {
  const SymMatrix full = random_symmetric(rng, n + 1);
  return BlockMatrix::from_full(full);
}

BlockMatrix random_S_member(Rng& rng, int n, int k) {
  SymMatrix r = random_cone_matrix(rng, n, k);
  const Spectral sp(r);
  const double sk = sp.sigma[static_cast<std::size_t>(k)];
  const Eigen::MatrixXd t = sp.newton(k - 1);
  for (;;) {
    const Eigen::VectorXd x = uniform_vector(rng, n, -1.0, 1.0);
    const double pair = x.dot(t * x);
    // F_k > 0 needs r00 > pair / sigma_k; draw r00 on a window around it.
    const double r00 = uniform(rng, -1.0, 3.0) + pair / sk;
    if (r00 * sk - pair > 0.01 * sk) return BlockMatrix(r00, x, r);
  }
}

}  // namespace gseq
